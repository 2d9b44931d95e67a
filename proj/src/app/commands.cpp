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

#include "app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>
#include <tuple>

#include "app/manifest.hpp"
#include "app/outputs.hpp"
#include "qncs/errors.hpp"
#include "qncs/rates.hpp"
#include "qncs/sim.hpp"
#include "qncs/text.hpp"

namespace qncs::app {

namespace {

using text::format_double;

// Left-aligned cell at least `width` wide with two trailing spaces.
std::string cell(std::string s, std::size_t width) {
  s.resize(std::max(width, s.size() + 2), ' ');
  return s;
}

std::string cell(double v, std::size_t width) { return cell(format_double(v), width); }

RunConfig load(const CommandOptions& opts) { return load_config(opts.config, opts.overrides); }

std::filesystem::path prepare_out(const CommandOptions& opts, const std::string& sub, const RunConfig& rc) {
  auto dir = resolve_out_dir(opts, sub, config_digest(rc.resolved));
  std::filesystem::create_directories(dir);
  return dir;
}

void write_manifest(const std::filesystem::path& dir, const RunConfig& rc, const std::string& sub,
                    std::vector<std::string> outputs) {
  outputs.push_back("manifest.json");
  write_file(dir / "manifest.json", make_manifest(rc, sub, std::move(outputs)).to_json().dump(2) + "\n");
}

// Runs fn; on an invariant breach writes failure.txt into dir and rethrows.
template <class Fn>
auto with_failure_dump(const std::filesystem::path& dir, Fn&& fn) {
  try {
    return fn();
  } catch (const InvariantBreach& e) {
    write_file(dir / "failure.txt", std::string("invariant breach: ") + e.what() + "\n");
    throw;
  }
}

}  // namespace

std::filesystem::path resolve_out_dir(const CommandOptions& opts, const std::string& subcommand,
                                      const std::string& digest) {
  if (opts.out) return *opts.out;
  const char* root = std::getenv("QNCS_OUT_ROOT");
  const std::filesystem::path base = (root != nullptr && *root != '\0') ? root : "qncs_runs";
  return base / (subcommand + "-" + digest.substr(0, 12));
}

int cmd_simulate(const CommandOptions& opts, std::ostream& out) {
  const RunConfig rc = load(opts);
  const auto dir = prepare_out(opts, "simulate", rc);
  const SimResult res = with_failure_dump(dir, [&] { return run(rc.sim); });
  std::vector<std::string> files{"summary.txt", "transmissions.csv"};
  if (rc.sim.record_trajectory) {
    write_file(dir / "trajectory.csv", trajectory_csv(res, rc.sim.plant.nx()));
    files.insert(files.begin(), "trajectory.csv");
  }
  write_file(dir / "transmissions.csv",
             transmissions_csv(res, rc.sim.structure, rc.sim.protocol.kind == ProtocolKind::TimeVarying));
  const std::string summary = render(sim_summary(rc, res));
  write_file(dir / "summary.txt", summary);
  write_manifest(dir, rc, "simulate", files);
  out << summary << "out_dir=" << dir.string() << "\n";
  return kExitOk;
}

int cmd_compare(const CommandOptions& opts, std::ostream& out) {
  const RunConfig rc = load(opts);
  const auto dir = prepare_out(opts, "compare", rc);
  const ProtocolComparison cmp = with_failure_dump(dir, [&] { return compare_protocols(rc.sim); });
  std::vector<std::string> files;
  KeyValues kv;
  for (const auto& [name, res, tv] : {std::tuple{"time_invariant", &cmp.time_invariant, false},
                                      std::tuple{"time_varying", &cmp.time_varying, true}}) {
    const std::string n = name;
    if (rc.sim.record_trajectory) {
      write_file(dir / ("trajectory_" + n + ".csv"), trajectory_csv(*res, rc.sim.plant.nx()));
      files.push_back("trajectory_" + n + ".csv");
    }
    write_file(dir / ("transmissions_" + n + ".csv"), transmissions_csv(*res, rc.sim.structure, tv));
    files.push_back("transmissions_" + n + ".csv");
    RunConfig one = rc;
    one.sim.protocol.kind = tv ? ProtocolKind::TimeVarying : ProtocolKind::TimeInvariant;
    for (const auto& [k, v] : sim_summary(one, *res)) kv.emplace_back(n + "." + k, v);
  }
  const auto ti_bits = cmp.time_invariant.totals.bits_attempted;
  const auto tv_bits = cmp.time_varying.totals.bits_attempted;
  kv.emplace_back("bits_saved", std::to_string(ti_bits - tv_bits));
  if (ti_bits > 0) kv.emplace_back("bits_ratio", format_double(static_cast<double>(tv_bits) / ti_bits));
  const std::string summary = render(kv);
  write_file(dir / "summary.txt", summary);
  files.push_back("summary.txt");
  write_manifest(dir, rc, "compare", files);
  out << summary << "out_dir=" << dir.string() << "\n";
  return kExitOk;
}

int cmd_bound(const CommandOptions& opts, std::ostream& out) {
  const RunConfig rc = load(opts);
  if (!rc.dos_params) throw ConfigError(opts.config.string() + ": dos_params: required by bound");
  const SimConfig& sim = rc.sim;
  const DoSParams& prm = *rc.dos_params;
  const double level = prm.level(sim.delta);
  // Throws DosBudgetExceeded before anything is printed.
  const double Q = bound_Q(prm, sim.delta);
  const RateAssignment suggested = select_rates(sim.structure, sim.delta, prm, rc.guard);
  const DecayCertificate cert = decay_certificate(suggested, sim.structure, sim.delta, prm);

  std::ostringstream table;
  table << cell("block", 6) << cell("c", 8) << cell("d", 8) << cell("n", 4) << cell("threshold", 20)
        << cell("suggested", 10) << cell("margin", 20) << cell("alpha", 22) << "theta\n";
  KeyValues kv;
  kv.emplace_back("delta", format_double(sim.delta));
  kv.emplace_back("dos_level", format_double(level));
  kv.emplace_back("Q", format_double(Q));
  for (std::size_t r = 0; r < sim.structure.blocks.size(); ++r) {
    const auto& b = sim.structure.blocks[r];
    const double thr = min_rate_threshold(b.c, sim.delta, level);
    const int R = suggested.R[r];
    const double margin = (b.c >= 0.0 && R == 0) ? -kInfinity : robustness_margin(R, b.c, sim.delta);
    table << cell(std::to_string(r + 1), 7) << cell(b.c, 8) << cell(b.d, 8) << cell(std::to_string(b.n), 4)
          << cell(thr, 20) << cell(std::to_string(R), 10) << cell(margin, 20) << cell(cert.alpha[r], 22)
          << format_double(cert.theta[r]) << "\n";
    const std::string p = "block" + std::to_string(r + 1) + ".";
    kv.emplace_back(p + "c", format_double(b.c));
    kv.emplace_back(p + "threshold", format_double(thr));
    kv.emplace_back(p + "suggested_rate", std::to_string(R));
    kv.emplace_back(p + "margin", format_double(margin));
    kv.emplace_back(p + "alpha", format_double(cert.alpha[r]));
    kv.emplace_back(p + "theta", format_double(cert.theta[r]));
    const int configured = sim.protocol.R[r];
    kv.emplace_back(p + "configured_rate", std::to_string(configured));
    kv.emplace_back(p + "configured_satisfies", rate_satisfies(configured, b.c, sim.delta, level) ? "1" : "0");
  }
  kv.emplace_back("certificate_valid", cert.valid ? "1" : "0");
  out << table.str() << "\n" << render(kv);
  return kExitOk;
}

bool analytic_stable(const BlockStructure& structure, double delta, int R, double level) {
  if (!(level < 1.0)) return false;
  return std::all_of(structure.blocks.begin(), structure.blocks.end(),
                     [&](const JordanBlock& b) { return rate_satisfies(R, b.c, delta, level); });
}

std::vector<SweepPoint> run_sweep(const RunConfig& rc, const SweepSpec& sweep) {
  if (sweep.points() > static_cast<std::size_t>(sweep.max_points)) {
    throw ConfigError("sweep grid has " + std::to_string(sweep.points()) + " points, above max_points " +
                      std::to_string(sweep.max_points));
  }
  std::vector<SweepPoint> points;
  for (int R : sweep.rates) {
    for (double level : sweep.levels) {
      points.push_back({R, level, analytic_stable(rc.sim.structure, rc.sim.delta, R, level),
                        std::numeric_limits<double>::quiet_NaN()});
    }
  }
  if (!sweep.empirical) return points;

  const std::size_t seeds = static_cast<std::size_t>(sweep.seeds);
  const std::size_t tasks = points.size() * seeds;
  std::vector<char> converged(tasks, 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  const LevelTraceGenerator gen{sweep.period_min, sweep.period_max};

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks && !failed; i = next++) {
      const SweepPoint& pt = points[i / seeds];
      try {
        SimConfig cfg = rc.sim;
        cfg.horizon = sweep.horizon;
        cfg.substeps = sweep.substeps;
        cfg.record_trajectory = false;
        cfg.dos_params.reset();
        cfg.protocol = ProtocolConfig{ProtocolKind::TimeInvariant,
                                      std::vector<int>(cfg.structure.blocks.size(), pt.R), {}};
        cfg.trace = generate_level_trace(gen, pt.level, cfg.delta, cfg.horizon, rc.seed + i % seeds);
        converged[i] = run(cfg).verdict == Verdict::Converged ? 1 : 0;
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  unsigned threads = sweep.parallelism > 0 ? static_cast<unsigned>(sweep.parallelism)
                                           : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  for (std::size_t p = 0; p < points.size(); ++p) {
    int count = 0;
    for (std::size_t s = 0; s < seeds; ++s) count += converged[p * seeds + s];
    points[p].empirical_fraction = static_cast<double>(count) / static_cast<double>(seeds);
  }
  return points;
}

std::string region_csv(const std::vector<SweepPoint>& points) {
  std::string out = "R,dos_level,analytic_stable,empirical_converged_fraction\n";
  for (const auto& p : points) {
    out += std::to_string(p.R) + "," + format_double(p.level) + "," + (p.analytic_stable ? "1" : "0") + "," +
           format_double(p.empirical_fraction) + "\n";
  }
  return out;
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out) {
  RunConfig rc = load(opts);
  if (opts.grid) rc.sweep = parse_grid_spec(*opts.grid, rc.sweep);
  if (opts.overrides.horizon) rc.sweep.horizon = *opts.overrides.horizon;
  if (opts.overrides.substeps) rc.sweep.substeps = *opts.overrides.substeps;
  if (opts.overrides.seed) rc.seed = *opts.overrides.seed;
  // Record the effective grid so the manifest reproduces this sweep.
  rc.resolved["sweep"]["rates"] = rc.sweep.rates;
  rc.resolved["sweep"]["levels"] = rc.sweep.levels;
  rc.resolved["sweep"]["horizon"] = rc.sweep.horizon;
  rc.resolved["sweep"]["substeps"] = rc.sweep.substeps;
  const auto dir = prepare_out(opts, "sweep", rc);
  const auto points = with_failure_dump(dir, [&] { return run_sweep(rc, rc.sweep); });
  write_file(dir / "region.csv", region_csv(points));
  write_manifest(dir, rc, "sweep", {"region.csv"});
  std::size_t stable = 0;
  double worst = 1.0;
  for (const auto& p : points) {
    if (!p.analytic_stable) continue;
    ++stable;
    if (rc.sweep.empirical) worst = std::min(worst, p.empirical_fraction);
  }
  out << "points=" << points.size() << "\nanalytic_stable_points=" << stable << "\n";
  if (rc.sweep.empirical) out << "min_empirical_fraction_on_stable=" << format_double(worst) << "\n";
  out << "out_dir=" << dir.string() << "\n";
  return kExitOk;
}

int cmd_dos_check(const CommandOptions& opts, std::ostream& out) {
  if (!opts.trace) throw ConfigError("dos-check: --trace is required");
  if (!opts.delta || !(*opts.delta > 0.0)) throw ConfigError("dos-check: --delta must be > 0");
  const double delta = *opts.delta;
  std::ifstream in(*opts.trace, std::ios::binary);
  if (!in) throw ConfigError(opts.trace->string() + ": cannot open trace");
  std::stringstream ss;
  ss << in.rdbuf();
  DoSTrace trace;
  try {
    trace = trace_from_csv(ss.str(), opts.overrides.horizon);
  } catch (const ConfigError& e) {
    throw ConfigError(opts.trace->string() + ": " + e.what());
  }
  const double H = trace.horizon();
  const int n = trace.empty() ? 0 : trace.count_transitions(0.0, H);
  const double dur = trace.empty() ? 0.0 : trace.dos_duration(0.0, H);
  const DoSParams avg = average_params(trace);
  out << "horizon=" << format_double(H) << "\nonsets=" << n << "\nduration=" << format_double(dur)
      << "\navg_tau_D=" << format_double(avg.tau_D) << "\navg_T=" << format_double(avg.T)
      << "\navg_level=" << format_double(avg.level(delta)) << "\n\n";
  out << cell("eta", 6) << cell("kappa", 6) << cell("tau_D", 20) << cell("T", 20) << cell("level", 20)
      << cell("Q", 20) << "min_successes\n";
  for (double eta : {0.0, 1.0, 2.0, 4.0}) {
    for (double kappa : {0.0, 1.0, 2.0, 4.0}) {
      out << cell(eta, 6) << cell(kappa, 7);
      try {
        const DoSParams fit = fit_params(trace, eta, kappa, delta);
        const double level = fit.level(delta);
        out << cell(fit.tau_D, 20) << cell(fit.T, 20) << cell(level, 20);
        if (level < 1.0) {
          out << cell(bound_Q(fit, delta), 20) << format_double(min_successes(fit, delta, 0.0, H)) << "\n";
        } else {
          out << cell("budget>=1", 20) << "-\n";
        }
      } catch (const std::invalid_argument&) {
        out << "infeasible\n";
      }
    }
  }
  return kExitOk;
}

}  // namespace qncs::app
