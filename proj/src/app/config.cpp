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

#include "app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "qncs/errors.hpp"
#include "qncs/rates.hpp"
#include "qncs/text.hpp"

namespace qncs::app {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
      fail(at(path, it.key()), "unknown field");
    }
  }
}

const Json& require(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(at(path, key), "missing required field");
  return j.at(key);
}

double as_number(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "-inf") return *text::parse_double(s);
  }
  fail(path, "expected a number (or \"inf\")");
}

double as_finite(const Json& j, const std::string& path) {
  const double v = as_number(j, path);
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(path, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t as_u64(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vector as_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = as_finite(j[i], at(path, i));
  return v;
}

Matrix as_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const auto rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].empty()) fail(at(path, r), "expected a non-empty row");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) fail(at(path, r), "row length differs from row 0");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_finite(j[r][c], at(at(path, r), c));
    }
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::vector<int> as_int_list(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], at(path, i)));
  return out;
}

std::vector<double> as_number_list(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_finite(j[i], at(path, i)));
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  if (n == 1) return {a};
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

std::vector<int> int_range(int a, int b) {
  std::vector<int> out;
  for (int r = a; r <= b; ++r) out.push_back(r);
  return out;
}

PlantSpec parse_plant(const Json& j) {
  const std::string p = "plant";
  check_keys(j, p, {"A", "B", "K"});
  PlantSpec plant{as_matrix(require(j, p, "A"), "plant.A"), as_matrix(require(j, p, "B"), "plant.B"),
                  as_matrix(require(j, p, "K"), "plant.K")};
  try {
    plant.validate();
  } catch (const ConfigError& e) {
    fail(p, e.what());
  }
  return plant;
}

BlockStructure parse_structure(const Json* j, const Matrix& A) {
  const std::string p = "structure";
  BlockStructure bs;
  try {
    if (j == nullptr) return BlockStructure::from_distinct_eigenvalues(A);
    check_keys(*j, p, {"blocks", "S"});
    const Json& blocks = require(*j, p, "blocks");
    if (!blocks.is_array() || blocks.empty()) fail("structure.blocks", "expected a non-empty array");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string bp = at("structure.blocks", i);
      check_keys(blocks[i], bp, {"c", "d", "n"});
      JordanBlock b;
      b.c = as_finite(require(blocks[i], bp, "c"), at(bp, "c"));
      b.d = blocks[i].contains("d") ? as_finite(blocks[i]["d"], at(bp, "d")) : 0.0;
      b.n = blocks[i].contains("n") ? as_int(blocks[i]["n"], at(bp, "n")) : 1;
      if (b.d < 0.0) fail(at(bp, "d"), "must be >= 0 (the pair c +- i d is stored once)");
      if (b.n < 1) fail(at(bp, "n"), "must be >= 1");
      bs.blocks.push_back(b);
    }
    bs.S = as_matrix(require(*j, p, "S"), "structure.S");
    bs.validate(A);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind("structure", 0) == 0) throw;
    fail(p, msg);
  }
  return bs;
}

Json structure_to_json(const BlockStructure& bs) {
  Json blocks = Json::array();
  for (const auto& b : bs.blocks) blocks.push_back({{"c", b.c}, {"d", b.d}, {"n", b.n}});
  return {{"blocks", blocks}, {"S", matrix_to_json(bs.S)}};
}

struct DosSection {
  DoSTrace trace;
  std::uint64_t seed = 0;
  Json resolved;
};

DoSTrace make_trace(std::vector<DoSInterval> ivs, double horizon, const std::string& path) {
  double h = horizon;
  if (!ivs.empty()) h = std::max(h, ivs.back().end());
  try {
    return DoSTrace(std::move(ivs), h);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
}

Json trace_intervals_json(const DoSTrace& tr) {
  Json ivs = Json::array();
  for (const auto& iv : tr.intervals()) ivs.push_back(Json::array({iv.h, iv.tau}));
  return ivs;
}

DosSection parse_dos(const Json* j, double horizon, const Overrides& ov, const std::filesystem::path& base_dir) {
  const std::string p = "dos";
  DosSection out;
  if (j == nullptr) {
    out.trace = DoSTrace({}, horizon);
    out.resolved = {{"kind", "none"}};
    return out;
  }
  const std::string kind = as_string(require(*j, p, "kind"), "dos.kind");
  if (kind == "none") {
    check_keys(*j, p, {"kind"});
    out.trace = DoSTrace({}, horizon);
    out.resolved = {{"kind", "none"}};
    return out;
  }
  if (kind == "intervals") {
    check_keys(*j, p, {"kind", "intervals", "generated_by"});
    const Json& arr = require(*j, p, "intervals");
    if (!arr.is_array()) fail("dos.intervals", "expected an array of [onset_s, duration_s] pairs");
    std::vector<DoSInterval> ivs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = at("dos.intervals", i);
      if (!arr[i].is_array() || arr[i].size() != 2) fail(ip, "expected [onset_s, duration_s]");
      ivs.push_back({as_finite(arr[i][0], at(ip, 0)), as_finite(arr[i][1], at(ip, 1))});
    }
    out.trace = make_trace(std::move(ivs), horizon, "dos.intervals");
    out.resolved = {{"kind", "intervals"}, {"intervals", trace_intervals_json(out.trace)}};
    if (j->contains("generated_by")) {
      out.resolved["generated_by"] = (*j)["generated_by"];
      if ((*j)["generated_by"].contains("seed")) out.seed = as_u64((*j)["generated_by"]["seed"], "dos.generated_by.seed");
    }
    return out;
  }
  if (kind == "csv") {
    check_keys(*j, p, {"kind", "path"});
    std::filesystem::path file = as_string(require(*j, p, "path"), "dos.path");
    if (file.is_relative()) file = base_dir / file;
    std::ifstream in(file, std::ios::binary);
    if (!in) fail("dos.path", "cannot read " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    DoSTrace parsed;
    try {
      parsed = trace_from_csv(ss.str());
    } catch (const ConfigError& e) {
      throw ConfigError(file.string() + ": " + e.what());
    }
    out.trace = make_trace(parsed.intervals(), std::max(horizon, parsed.horizon()), "dos.path");
    out.resolved = {{"kind", "intervals"},
                    {"intervals", trace_intervals_json(out.trace)},
                    {"generated_by", {{"csv", file.filename().string()}}}};
    return out;
  }
  if (kind == "generator") {
    check_keys(*j, p, {"kind", "generator", "seed", "match", "max_tries"});
    TraceGenerator gen;
    if (j->contains("generator")) {
      const Json& g = (*j)["generator"];
      const std::string gp = "dos.generator";
      check_keys(g, gp, {"period_min", "period_max", "duty_min", "duty_max", "phase"});
      if (g.contains("period_min")) gen.period_min = as_finite(g["period_min"], at(gp, "period_min"));
      if (g.contains("period_max")) gen.period_max = as_finite(g["period_max"], at(gp, "period_max"));
      if (g.contains("duty_min")) gen.duty_min = as_finite(g["duty_min"], at(gp, "duty_min"));
      if (g.contains("duty_max")) gen.duty_max = as_finite(g["duty_max"], at(gp, "duty_max"));
      if (g.contains("phase")) gen.phase = as_finite(g["phase"], at(gp, "phase"));
      try {
        gen.validate();
      } catch (const std::exception& e) {
        fail(gp, e.what());
      }
    }
    std::uint64_t seed = j->contains("seed") ? as_u64((*j)["seed"], "dos.seed") : 0;
    if (ov.seed) seed = *ov.seed;
    Json gen_json = {{"period_min", gen.period_min},
                     {"period_max", gen.period_max},
                     {"duty_min", gen.duty_min},
                     {"duty_max", gen.duty_max},
                     {"phase", gen.phase}};
    Json provenance = {{"generator", gen_json}, {"start_seed", seed}};
    if (j->contains("match")) {
      const Json& m = (*j)["match"];
      const std::string mp = "dos.match";
      check_keys(m, mp, {"count", "duration", "tolerance"});
      TraceTarget target;
      if (m.contains("count")) target.count = as_int(m["count"], at(mp, "count"));
      if (m.contains("duration")) target.duration = as_finite(m["duration"], at(mp, "duration"));
      if (m.contains("tolerance")) target.duration_tol = as_finite(m["tolerance"], at(mp, "tolerance"));
      const int tries = j->contains("max_tries") ? as_int((*j)["max_tries"], "dos.max_tries") : 1000000;
      try {
        seed = search_trace_seed(gen, horizon, target, seed, tries);
      } catch (const std::runtime_error& e) {
        fail(mp, e.what());
      }
      provenance["match"] = {{"count", target.count}, {"duration", target.duration}, {"tolerance", target.duration_tol}};
    }
    provenance["seed"] = seed;
    out.seed = seed;
    out.trace = generate_trace(gen, horizon, seed);
    out.resolved = {{"kind", "intervals"}, {"intervals", trace_intervals_json(out.trace)}, {"generated_by", provenance}};
    return out;
  }
  fail("dos.kind", "expected one of none, intervals, csv, generator (got \"" + kind + "\")");
}

std::optional<DoSParams> parse_dos_params(const Json* j, const DoSTrace& trace, double delta, Json& resolved) {
  const std::string p = "dos_params";
  if (j == nullptr) return std::nullopt;
  DoSParams prm;
  if (j->is_string()) {
    const auto s = j->get<std::string>();
    if (s != "average") fail(p, "expected an object or \"average\"");
    prm = average_params(trace);
  } else if (j->contains("level")) {
    check_keys(*j, p, {"level"});
    const double level = as_finite((*j)["level"], "dos_params.level");
    if (level < 0.0) fail("dos_params.level", "must be >= 0");
    // Level-only budget: frequency term carries the whole level.
    prm = DoSParams{0.0, level > 0.0 ? delta / level : kInfinity, 0.0, kInfinity};
  } else {
    check_keys(*j, p, {"eta", "tau_D", "kappa", "T"});
    prm.eta = as_finite(require(*j, p, "eta"), "dos_params.eta");
    prm.tau_D = as_number(require(*j, p, "tau_D"), "dos_params.tau_D");
    prm.kappa = as_finite(require(*j, p, "kappa"), "dos_params.kappa");
    prm.T = as_number(require(*j, p, "T"), "dos_params.T");
  }
  try {
    prm.validate();
  } catch (const ConfigError& e) {
    fail(p, e.what());
  }
  if (j->is_object() && j->contains("level")) {
    resolved = {{"level", (*j)["level"]}};
  } else {
    resolved = {{"eta", prm.eta}, {"tau_D", number_to_json(prm.tau_D)}, {"kappa", prm.kappa}, {"T", number_to_json(prm.T)}};
  }
  return prm;
}

SweepSpec parse_sweep(const Json* j, Json& resolved) {
  SweepSpec sw;
  sw.rates = int_range(1, 20);
  sw.levels = linspace(0.025, 0.975, 20);
  if (j != nullptr) {
    const std::string p = "sweep";
    check_keys(*j, p,
               {"rates", "levels", "seeds", "empirical", "horizon", "substeps", "period_min", "period_max",
                "max_points", "parallelism"});
    if (j->contains("rates")) {
      const Json& r = (*j)["rates"];
      if (r.is_object()) {
        check_keys(r, "sweep.rates", {"from", "to"});
        sw.rates = int_range(as_int(require(r, "sweep.rates", "from"), "sweep.rates.from"),
                             as_int(require(r, "sweep.rates", "to"), "sweep.rates.to"));
      } else {
        sw.rates = as_int_list(r, "sweep.rates");
      }
    }
    if (j->contains("levels")) {
      const Json& l = (*j)["levels"];
      if (l.is_object()) {
        check_keys(l, "sweep.levels", {"from", "to", "count"});
        const int n = as_int(require(l, "sweep.levels", "count"), "sweep.levels.count");
        if (n < 1) fail("sweep.levels.count", "must be >= 1");
        sw.levels = linspace(as_finite(require(l, "sweep.levels", "from"), "sweep.levels.from"),
                             as_finite(require(l, "sweep.levels", "to"), "sweep.levels.to"), n);
      } else {
        sw.levels = as_number_list(l, "sweep.levels");
      }
    }
    if (j->contains("seeds")) sw.seeds = as_int((*j)["seeds"], "sweep.seeds");
    if (j->contains("empirical")) sw.empirical = as_bool((*j)["empirical"], "sweep.empirical");
    if (j->contains("horizon")) sw.horizon = as_finite((*j)["horizon"], "sweep.horizon");
    if (j->contains("substeps")) sw.substeps = as_int((*j)["substeps"], "sweep.substeps");
    if (j->contains("period_min")) sw.period_min = as_finite((*j)["period_min"], "sweep.period_min");
    if (j->contains("period_max")) sw.period_max = as_finite((*j)["period_max"], "sweep.period_max");
    if (j->contains("max_points")) sw.max_points = as_int((*j)["max_points"], "sweep.max_points");
    if (j->contains("parallelism")) sw.parallelism = as_int((*j)["parallelism"], "sweep.parallelism");
  }
  for (std::size_t i = 0; i < sw.rates.size(); ++i) {
    if (sw.rates[i] < 0 || sw.rates[i] > kMaxBits) fail(at("sweep.rates", i), "rate outside [0, 52]");
  }
  for (std::size_t i = 0; i < sw.levels.size(); ++i) {
    if (sw.levels[i] < 0.0) fail(at("sweep.levels", i), "level must be >= 0");
  }
  if (sw.seeds < 1) fail("sweep.seeds", "must be >= 1");
  if (!(sw.horizon > 0.0)) fail("sweep.horizon", "must be > 0");
  if (sw.substeps < 1) fail("sweep.substeps", "must be >= 1");
  if (!(sw.period_min > 0.0) || sw.period_max < sw.period_min) fail("sweep", "need 0 < period_min <= period_max");
  if (sw.parallelism < 0) fail("sweep.parallelism", "must be >= 0");
  Json levels = Json::array();
  for (double l : sw.levels) levels.push_back(l);
  resolved = {{"rates", sw.rates},         {"levels", levels},         {"seeds", sw.seeds},
              {"empirical", sw.empirical}, {"horizon", sw.horizon},     {"substeps", sw.substeps},
              {"period_min", sw.period_min}, {"period_max", sw.period_max}, {"max_points", sw.max_points},
              {"parallelism", sw.parallelism}};
  return sw;
}

const Json* find(const Json& j, const char* key) { return j.contains(key) ? &j.at(key) : nullptr; }

}  // namespace

Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return text::format_double(v);
}

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

RunConfig parse_config(const Json& input, const Overrides& ov, const std::filesystem::path& base_dir) {
  const Json& doc = (input.is_object() && input.contains("manifest")) ? input.at("config") : input;
  check_keys(doc, "", {"plant", "structure", "network", "dos", "dos_params", "protocol", "simulation", "sweep"});

  RunConfig rc;
  SimConfig& sim = rc.sim;
  sim.plant = parse_plant(require(doc, "", "plant"));
  sim.structure = parse_structure(find(doc, "structure"), sim.plant.A);

  const Json& net = require(doc, "", "network");
  check_keys(net, "network", {"delta"});
  sim.delta = as_finite(require(net, "network", "delta"), "network.delta");
  if (!(sim.delta > 0.0)) fail("network.delta", "must be > 0");

  Json sim_resolved;
  if (const Json* s = find(doc, "simulation")) {
    check_keys(*s, "simulation", {"horizon", "substeps", "x0", "j_margin", "record_trajectory"});
    if (s->contains("horizon")) sim.horizon = as_finite((*s)["horizon"], "simulation.horizon");
    if (s->contains("substeps")) sim.substeps = as_int((*s)["substeps"], "simulation.substeps");
    if (s->contains("x0")) sim.x0 = as_vector((*s)["x0"], "simulation.x0");
    if (s->contains("j_margin")) sim.j_margin = as_finite((*s)["j_margin"], "simulation.j_margin");
    if (s->contains("record_trajectory")) {
      sim.record_trajectory = as_bool((*s)["record_trajectory"], "simulation.record_trajectory");
    }
  }
  if (ov.horizon) sim.horizon = *ov.horizon;
  if (ov.substeps) sim.substeps = *ov.substeps;
  if (sim.x0.size() == 0) sim.x0 = Vector::Ones(sim.plant.nx());
  if (sim.x0.size() != sim.plant.nx()) {
    fail("simulation.x0", "expected " + std::to_string(sim.plant.nx()) + " entries");
  }
  if (!(sim.horizon >= sim.delta)) fail("simulation.horizon", "must be >= network.delta");
  if (sim.substeps < 1) fail("simulation.substeps", "must be >= 1");
  if (!(sim.j_margin > 0.0)) fail("simulation.j_margin", "must be > 0");

  DosSection dos = parse_dos(find(doc, "dos"), sim.horizon, ov, base_dir);
  sim.trace = dos.trace;
  rc.seed = dos.seed;

  Json dos_params_resolved;
  rc.dos_params = parse_dos_params(find(doc, "dos_params"), sim.trace, sim.delta, dos_params_resolved);
  sim.dos_params = rc.dos_params;

  const auto p = sim.structure.blocks.size();
  Json protocol_resolved;
  {
    const Json* pj = find(doc, "protocol");
    const std::string pp = "protocol";
    if (pj == nullptr) fail(pp, "missing required section");
    check_keys(*pj, pp, {"kind", "rates", "w", "guard"});
    const std::string kind = pj->contains("kind") ? as_string((*pj)["kind"], "protocol.kind") : "time-invariant";
    if (kind == "time-invariant") {
      sim.protocol.kind = ProtocolKind::TimeInvariant;
    } else if (kind == "time-varying") {
      sim.protocol.kind = ProtocolKind::TimeVarying;
    } else {
      fail("protocol.kind", "expected time-invariant or time-varying");
    }
    rc.guard = pj->contains("guard") ? as_int((*pj)["guard"], "protocol.guard") : 0;
    if (rc.guard < 0) fail("protocol.guard", "must be >= 0");
    const Json& rates = require(*pj, pp, "rates");
    if (rates.is_string()) {
      if (rates.get<std::string>() != "auto") fail("protocol.rates", "expected an array or \"auto\"");
      if (!rc.dos_params) fail("protocol.rates", "\"auto\" needs a dos_params section");
      sim.protocol.R = select_rates(sim.structure, sim.delta, *rc.dos_params, rc.guard).R;
    } else {
      sim.protocol.R = as_int_list(rates, "protocol.rates");
    }
    if (sim.protocol.R.size() != p) {
      fail("protocol.rates", "expected one rate per block (" + std::to_string(p) + ")");
    }
    for (std::size_t i = 0; i < p; ++i) {
      if (sim.protocol.R[i] < 0 || sim.protocol.R[i] > kMaxBits) fail(at("protocol.rates", i), "outside [0, 52]");
    }
    if (pj->contains("w")) {
      sim.protocol.w = as_number_list((*pj)["w"], "protocol.w");
      if (sim.protocol.w.size() != p) fail("protocol.w", "expected one growth rate per block");
      for (std::size_t i = 0; i < p; ++i) {
        if (!(sim.protocol.w[i] > sim.structure.blocks[i].c)) fail(at("protocol.w", i), "must exceed the block's c");
      }
    }
    protocol_resolved = {{"kind", kind}, {"rates", sim.protocol.R}, {"guard", rc.guard}};
    if (!sim.protocol.w.empty()) protocol_resolved["w"] = sim.protocol.w;
  }

  Json sweep_resolved;
  rc.sweep = parse_sweep(find(doc, "sweep"), sweep_resolved);

  sim_resolved = {{"horizon", sim.horizon},
                  {"substeps", sim.substeps},
                  {"x0", vector_to_json(sim.x0)},
                  {"j_margin", sim.j_margin},
                  {"record_trajectory", sim.record_trajectory}};

  rc.resolved = {{"plant",
                  {{"A", matrix_to_json(sim.plant.A)},
                   {"B", matrix_to_json(sim.plant.B)},
                   {"K", matrix_to_json(sim.plant.K)}}},
                 {"structure", structure_to_json(sim.structure)},
                 {"network", {{"delta", sim.delta}}},
                 {"dos", dos.resolved},
                 {"protocol", protocol_resolved},
                 {"simulation", sim_resolved},
                 {"sweep", sweep_resolved}};
  if (rc.dos_params) rc.resolved["dos_params"] = dos_params_resolved;
  return rc;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& ov) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  const Json doc = parse_json_text(ss.str(), path.string());
  try {
    return parse_config(doc, ov, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

SweepSpec parse_grid_spec(const std::string& spec, SweepSpec base) {
  for (auto part : text::split(spec, ';')) {
    part = text::trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw ConfigError("grid: expected key=value in \"" + std::string(part) + "\"");
    const auto key = text::trim(part.substr(0, eq));
    const auto fields = text::split(part.substr(eq + 1), ':');
    std::vector<double> nums;
    for (auto f : fields) {
      const auto v = text::parse_double(text::trim(f));
      if (!v || !std::isfinite(*v)) throw ConfigError("grid: bad number \"" + std::string(f) + "\"");
      nums.push_back(*v);
    }
    if (key == "R") {
      if (nums.size() != 2 || nums[0] != std::floor(nums[0]) || nums[1] != std::floor(nums[1]) || nums[0] > nums[1] ||
          nums[0] < 0 || nums[1] > kMaxBits) {
        throw ConfigError("grid: R expects from:to with integers in [0, 52]");
      }
      base.rates = int_range(static_cast<int>(nums[0]), static_cast<int>(nums[1]));
    } else if (key == "level") {
      if (nums.size() != 3 || nums[2] < 1 || nums[2] != std::floor(nums[2]) || nums[0] < 0 || nums[1] < 0) {
        throw ConfigError("grid: level expects from:to:count with count >= 1 and non-negative levels");
      }
      base.levels = linspace(nums[0], nums[1], static_cast<int>(nums[2]));
    } else {
      throw ConfigError("grid: unknown axis \"" + std::string(key) + "\" (expected R or level)");
    }
  }
  return base;
}

}  // namespace qncs::app
