// Copyright 2026 The qncs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings over plain arrays, lists and dicts.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qncs/dos.hpp"
#include "qncs/errors.hpp"
#include "qncs/quantize.hpp"
#include "qncs/rates.hpp"
#include "qncs/sim.hpp"
#include "qncs/version.hpp"

namespace py = pybind11;
using namespace qncs;

namespace {

using Interval = std::pair<double, double>;
using BlockTuple = std::tuple<double, double, int>;  // (c, d, n)

DoSTrace to_trace(const std::vector<Interval>& intervals, double horizon) {
  std::vector<DoSInterval> ivs;
  ivs.reserve(intervals.size());
  for (const auto& [h, tau] : intervals) ivs.push_back({h, tau});
  return DoSTrace(std::move(ivs), horizon);
}

std::vector<Interval> from_trace(const DoSTrace& tr) {
  std::vector<Interval> out;
  for (const auto& iv : tr.intervals()) out.emplace_back(iv.h, iv.tau);
  return out;
}

ProtocolKind to_kind(const std::string& s) {
  if (s == "time-invariant") return ProtocolKind::TimeInvariant;
  if (s == "time-varying") return ProtocolKind::TimeVarying;
  throw ConfigError("protocol must be 'time-invariant' or 'time-varying'");
}

SimConfig make_config(const Matrix& A, const Matrix& B, const Matrix& K, const std::optional<std::vector<BlockTuple>>& blocks,
                      const std::optional<Matrix>& S, const std::vector<Interval>& intervals, const std::vector<int>& rates,
                      const std::string& protocol, double delta, double horizon, int substeps,
                      const std::optional<Vector>& x0, double j_margin) {
  SimConfig cfg;
  cfg.plant = {A, B, K};
  if (blocks) {
    for (const auto& [c, d, n] : *blocks) cfg.structure.blocks.push_back({c, d, n});
    cfg.structure.S = S ? *S : Matrix::Identity(A.rows(), A.rows());
  } else {
    cfg.structure = BlockStructure::from_distinct_eigenvalues(A);
  }
  cfg.trace = to_trace(intervals, horizon);
  cfg.protocol.kind = to_kind(protocol);
  cfg.protocol.R = rates;
  cfg.delta = delta;
  cfg.horizon = horizon;
  cfg.substeps = substeps;
  cfg.x0 = x0 ? *x0 : Vector::Ones(A.rows());
  cfg.j_margin = j_margin;
  cfg.record_trajectory = false;
  return cfg;
}

py::dict result_dict(const SimResult& r) {
  py::dict d;
  d["verdict"] = std::string(to_string(r.verdict));
  d["decay_exponent"] = r.fit.exponent;
  d["decay_r2"] = r.fit.r2;
  d["attempts"] = r.totals.attempts;
  d["successes"] = r.totals.successes;
  d["bits_attempted"] = r.totals.bits_attempted;
  d["bits_delivered"] = r.totals.bits_delivered;
  d["max_error_ratio"] = r.max_error_ratio;
  d["final_norm"] = r.final_norm;
  d["t"] = r.sample_t;
  d["state_norm"] = r.sample_norm;
  d["range_norm"] = r.sample_J_norm;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qncs, m) {
  m.doc() = "Quantised networked control under denial-of-service";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvariantBreach>(m, "InvariantBreach", PyExc_RuntimeError);
  py::register_exception<DosBudgetExceeded>(m, "DosBudgetExceeded", PyExc_ValueError);

  m.def("quantize", &quantize, py::arg("chi"), py::arg("bits"));
  m.def(
      "encode", [](double chi, int bits) { return encode(chi, bits).index; }, py::arg("chi"), py::arg("bits"),
      "Offset-binary codeword index.");
  m.def(
      "decode", [](std::uint64_t index, int bits) { return decode(Codeword{index, bits}); }, py::arg("index"),
      py::arg("bits"));

  m.def("min_rate_threshold", py::overload_cast<double, double, double>(&min_rate_threshold), py::arg("c"),
        py::arg("delta"), py::arg("level"));
  m.def("robustness_margin", &robustness_margin, py::arg("R"), py::arg("c"), py::arg("delta"));
  m.def("select_rate", &select_rate, py::arg("c"), py::arg("delta"), py::arg("level"), py::arg("guard") = 0);

  m.def(
      "generate_trace",
      [](double horizon, std::uint64_t seed, double period_min, double period_max, double duty_min, double duty_max,
         double phase) {
        return from_trace(generate_trace(TraceGenerator{period_min, period_max, duty_min, duty_max, phase}, horizon, seed));
      },
      py::arg("horizon"), py::arg("seed"), py::arg("period_min") = 0.5, py::arg("period_max") = 1.5,
      py::arg("duty_min") = 0.6, py::arg("duty_max") = 0.9, py::arg("phase") = 0.0,
      "List of (onset, duration) pairs.");
  m.def(
      "average_params",
      [](const std::vector<Interval>& intervals, double horizon) {
        const DoSParams p = average_params(to_trace(intervals, horizon));
        return py::dict(py::arg("tau_D") = p.tau_D, py::arg("T") = p.T);
      },
      py::arg("intervals"), py::arg("horizon"));
  m.def(
      "successful_instants",
      [](const std::vector<Interval>& intervals, double horizon, double delta) {
        return successful_instants(to_trace(intervals, horizon), delta);
      },
      py::arg("intervals"), py::arg("horizon"), py::arg("delta"));

  m.def(
      "simulate",
      [](const Matrix& A, const Matrix& B, const Matrix& K, const std::vector<int>& rates,
         const std::vector<Interval>& intervals, const std::string& protocol, double delta, double horizon,
         int substeps, const std::optional<Vector>& x0, double j_margin,
         const std::optional<std::vector<BlockTuple>>& blocks, const std::optional<Matrix>& S) {
        const auto cfg = make_config(A, B, K, blocks, S, intervals, rates, protocol, delta, horizon, substeps, x0, j_margin);
        SimResult r;
        {
          py::gil_scoped_release release;
          r = run(cfg);
        }
        return result_dict(r);
      },
      py::arg("A"), py::arg("B"), py::arg("K"), py::arg("rates"), py::arg("intervals") = std::vector<Interval>{},
      py::arg("protocol") = "time-invariant", py::arg("delta") = 0.1, py::arg("horizon") = 20.0,
      py::arg("substeps") = 20, py::arg("x0") = std::nullopt, py::arg("j_margin") = 1.0,
      py::arg("blocks") = std::nullopt, py::arg("S") = std::nullopt,
      "Closed-loop run. blocks is a list of (c, d, n); omitted, it is derived from distinct eigenvalues.");
  m.def(
      "compare",
      [](const Matrix& A, const Matrix& B, const Matrix& K, const std::vector<int>& rates,
         const std::vector<Interval>& intervals, double delta, double horizon, int substeps,
         const std::optional<Vector>& x0, double j_margin, const std::optional<std::vector<BlockTuple>>& blocks,
         const std::optional<Matrix>& S) {
        const auto cfg = make_config(A, B, K, blocks, S, intervals, rates, "time-invariant", delta, horizon, substeps,
                                     x0, j_margin);
        ProtocolComparison c;
        {
          py::gil_scoped_release release;
          c = compare_protocols(cfg);
        }
        py::dict d;
        d["time_invariant"] = result_dict(c.time_invariant);
        d["time_varying"] = result_dict(c.time_varying);
        return d;
      },
      py::arg("A"), py::arg("B"), py::arg("K"), py::arg("rates"), py::arg("intervals") = std::vector<Interval>{},
      py::arg("delta") = 0.1, py::arg("horizon") = 20.0, py::arg("substeps") = 20, py::arg("x0") = std::nullopt,
      py::arg("j_margin") = 1.0, py::arg("blocks") = std::nullopt, py::arg("S") = std::nullopt);
}
