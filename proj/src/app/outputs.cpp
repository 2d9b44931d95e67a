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

#include "app/outputs.hpp"

#include <algorithm>
#include <fstream>

#include "qncs/errors.hpp"
#include "qncs/rates.hpp"
#include "qncs/text.hpp"
#include "qncs/tvr.hpp"

namespace qncs::app {

namespace {

using text::format_double;

void append_vector(std::string& row, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    row += ',';
    row += format_double(v[i]);
  }
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string trajectory_csv(const SimResult& res, int nx) {
  std::string out = "t";
  for (const char* name : {"x", "xhat", "e", "j"}) {
    for (int i = 1; i <= nx; ++i) out += std::string(",") + name + "_" + std::to_string(i);
  }
  out += ",dos_active,attempt,success,bits_this_attempt\n";
  for (const auto& s : res.trajectory) {
    std::string row = format_double(s.t);
    append_vector(row, s.x);
    append_vector(row, s.xhat);
    append_vector(row, s.e);
    append_vector(row, s.J);
    row += "," + flag(s.dos_active) + "," + flag(s.attempt) + "," + flag(s.success) + "," + std::to_string(s.bits);
    out += row;
    out += '\n';
  }
  return out;
}

std::string transmissions_csv(const SimResult& res, const BlockStructure& structure, bool time_varying) {
  const auto p = structure.blocks.size();
  const int n = structure.nx();
  std::string out = "t,success,total_bits";
  for (std::size_t r = 0; r < p; ++r) out += ",budget_" + std::to_string(r + 1);
  for (int l = 1; l <= n; ++l) out += ",index_" + std::to_string(l) + ",bits_" + std::to_string(l);
  if (time_varying) {
    for (std::size_t r = 0; r < p; ++r) out += ",clock_g_" + std::to_string(r + 1);
    for (std::size_t r = 0; r < p; ++r) out += ",clock_roll_" + std::to_string(r + 1);
  }
  out += '\n';
  for (const auto& tx : res.log) {
    std::string row = format_double(tx.t) + "," + flag(tx.success) + "," + std::to_string(tx.total_bits);
    for (int b : tx.block_bits) row += "," + std::to_string(b);
    for (int l = 0; l < n; ++l) {
      if (tx.success) {
        const auto& cw = tx.codewords[static_cast<std::size_t>(l)];
        row += "," + std::to_string(cw.index) + "," + std::to_string(cw.bits);
      } else {
        row += ",,";
      }
    }
    if (time_varying) {
      for (int g : tx.clock_g) row += "," + std::to_string(g);
      for (bool rolled : tx.rolled) row += "," + flag(rolled);
    }
    out += row;
    out += '\n';
  }
  return out;
}

KeyValues sim_summary(const RunConfig& rc, const SimResult& res) {
  const SimConfig& sim = rc.sim;
  KeyValues kv;
  kv.emplace_back("protocol", to_string(sim.protocol.kind));
  kv.emplace_back("verdict", to_string(res.verdict));
  kv.emplace_back("verdict_rule",
                  "converged if |x(end)| < 1e-6 |x0| or decay exponent < 0 with R2 > 0.9; diverged if |x| > 1e9 |x0|; "
                  "finite-horizon heuristic");
  kv.emplace_back("decay_exponent", format_double(res.fit.exponent));
  kv.emplace_back("decay_r2", format_double(res.fit.r2));
  kv.emplace_back("x0_norm", format_double(res.x0_norm));
  kv.emplace_back("final_norm", format_double(res.final_norm));
  kv.emplace_back("end_time", format_double(res.end_time));
  kv.emplace_back("stop_reason", res.stop_reason.empty() ? "horizon" : res.stop_reason);
  kv.emplace_back("attempts", std::to_string(res.totals.attempts));
  kv.emplace_back("successes", std::to_string(res.totals.successes));
  kv.emplace_back("bits_attempted", std::to_string(res.totals.bits_attempted));
  kv.emplace_back("bits_delivered", std::to_string(res.totals.bits_delivered));
  if (res.totals.attempts > 0) {
    kv.emplace_back("rate_attempted_bps",
                    format_double(static_cast<double>(res.totals.bits_attempted) / (res.totals.attempts * sim.delta)));
  }
  if (res.end_time > 0.0) {
    kv.emplace_back("rate_delivered_bps", format_double(static_cast<double>(res.totals.bits_delivered) / res.end_time));
  }
  kv.emplace_back("max_error_ratio", format_double(res.max_error_ratio));
  std::string rates;
  for (std::size_t r = 0; r < sim.protocol.R.size(); ++r) rates += (r ? " " : "") + std::to_string(sim.protocol.R[r]);
  kv.emplace_back("rates", rates);
  if (!res.clock_periods.empty()) {
    double worst = 0.0;
    for (const auto& cp : res.clock_periods) {
      worst = std::max(worst, spectral_check(cp, sim.structure.blocks[static_cast<std::size_t>(cp.block)].c));
    }
    kv.emplace_back("clock_periods", std::to_string(res.clock_periods.size()));
    kv.emplace_back("max_period_eigenvalue", format_double(worst));
  }
  const DoSTrace& tr = sim.trace;
  const double H = sim.horizon;
  kv.emplace_back("dos_onsets", std::to_string(tr.empty() ? 0 : tr.count_transitions(0.0, H)));
  kv.emplace_back("dos_duration", format_double(tr.empty() ? 0.0 : tr.dos_duration(0.0, H)));
  const DoSParams avg = average_params(tr);
  kv.emplace_back("dos_avg_tau_D", format_double(avg.tau_D));
  kv.emplace_back("dos_avg_T", format_double(avg.T));
  kv.emplace_back("dos_avg_level", format_double(avg.level(sim.delta)));
  if (rc.dos_params) {
    kv.emplace_back("dos_params_eta", format_double(rc.dos_params->eta));
    kv.emplace_back("dos_params_tau_D", format_double(rc.dos_params->tau_D));
    kv.emplace_back("dos_params_kappa", format_double(rc.dos_params->kappa));
    kv.emplace_back("dos_params_T", format_double(rc.dos_params->T));
    kv.emplace_back("dos_params_level", format_double(rc.dos_params->level(sim.delta)));
  }
  for (std::size_t i = 0; i < res.warnings.size(); ++i) kv.emplace_back("warning_" + std::to_string(i + 1), res.warnings[i]);
  return kv;
}

std::string render(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qncs::app
