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

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qncs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Tolerance used when comparing attempt instants k*delta against interval
/// endpoints read from text.
inline constexpr double kTimeEps = 1e-9;

/// DoS active on {h} U [h, h + tau[. tau == 0 is a single pulse.
struct DoSInterval {
  double h = 0.0;
  double tau = 0.0;

  [[nodiscard]] double end() const { return h + tau; }
  bool operator==(const DoSInterval&) const = default;
};

class DoSTrace {
 public:
  DoSTrace() = default;
  /// Throws ConfigError if intervals are unsorted, overlapping/adjacent or
  /// stick out of [0, horizon].
  DoSTrace(std::vector<DoSInterval> intervals, double horizon);

  [[nodiscard]] const std::vector<DoSInterval>& intervals() const { return intervals_; }
  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] bool empty() const { return intervals_.empty(); }

  /// True if an attempt at time t is blocked (closed at onset, open at end).
  [[nodiscard]] bool blocks(double t) const;

  /// Number of onsets h_n with a <= h_n <= b.
  [[nodiscard]] int count_transitions(double a, double b) const;
  /// Measure of the DoS set intersected with [a, b].
  [[nodiscard]] double dos_duration(double a, double b) const;

  bool operator==(const DoSTrace&) const = default;

 private:
  void check_window(double a, double b) const;
  [[nodiscard]] double cumulative(double x) const;  // |Xi(0, x)|

  std::vector<DoSInterval> intervals_;
  std::vector<double> prefix_;  // prefix_[i] = sum of tau over intervals before i
  double horizon_ = 0.0;
};

/// Frequency (eta, tau_D) and duration (kappa, T) budgets. tau_D or T equal
/// to kInfinity encode the reliable-network limit.
struct DoSParams {
  double eta = 0.0;
  double tau_D = kInfinity;
  double kappa = 0.0;
  double T = kInfinity;

  void validate() const;
  /// 1/T + delta/tau_D.
  [[nodiscard]] double level(double delta) const { return 1.0 / T + delta / tau_D; }
};

struct AdmissibilityResult {
  bool ok = true;
  double tau = 0.0;  // violating window, valid when !ok
  double t = 0.0;
  std::string which;  // "frequency" or "duration"
};

/// Window endpoints on which both assumption residuals attain their suprema:
/// all interval endpoints, 0, the horizon and multiples of grid.
std::vector<double> candidate_points(const DoSTrace& trace, double grid);

/// On failure, names the window with the largest excess (frequency first).
AdmissibilityResult check_admissible(const DoSTrace& trace, const DoSParams& params, double grid);

/// Tightest tau_D and T for the given eta and kappa. Returns kInfinity
/// sentinels for an empty trace. Throws std::invalid_argument if the pair
/// (eta, kappa) admits no finite fit (eta < 1 with any onset) or the fitted
/// T would not exceed 1.
DoSParams fit_params(const DoSTrace& trace, double eta, double kappa, double grid = 0.0);

/// Whole-horizon averages: tau_D = horizon / n(0, H), T = horizon / |Xi(0, H)|.
DoSParams average_params(const DoSTrace& trace);

/// (kappa + eta delta) / (1 - 1/T - delta/tau_D). Throws DosBudgetExceeded.
double bound_Q(const DoSParams& params, double delta);

/// Lower bound on the number of successes in [z0, zm[.
double min_successes(const DoSParams& params, double delta, double z0, double zm);

/// Number of attempts k*delta in [0, horizon].
int attempt_count(double horizon, double delta);

/// Attempt instants k*delta <= horizon not blocked by DoS.
std::vector<double> successful_instants(const DoSTrace& trace, double delta);

struct TraceGenerator {
  double period_min = 0.5;
  double period_max = 1.5;
  double duty_min = 0.6;
  double duty_max = 0.9;
  /// Offset of the first period start.
  double phase = 0.0;

  void validate() const;
};

/// Deterministic sequence of periods; each period starts with its DoS phase
/// lasting duty * period. Zero-length draws emit nothing and touching
/// intervals are merged.
DoSTrace generate_trace(const TraceGenerator& gen, double horizon, std::uint64_t seed);

/// Periods drawn from [period_min, period_max] (stretched so that every
/// period exceeds 2 delta / level); each carries one DoS interval of length
/// level * period - delta, so every period spends exactly `level` of the
/// combined budget 1/T + delta/tau_D.
struct LevelTraceGenerator {
  double period_min = 1.0;
  double period_max = 1.5;
};

/// First onset uniform in [0, period). level == 0 gives an empty trace.
DoSTrace generate_level_trace(const LevelTraceGenerator& gen, double level, double delta, double horizon,
                              std::uint64_t seed);

struct TraceTarget {
  int count = 20;
  double duration = 15.52;
  double duration_tol = 0.5;
};

/// First seed >= seed_start whose generated trace has exactly target.count
/// onsets and a DoS measure within tolerance. Throws std::runtime_error after
/// max_tries seeds.
std::uint64_t search_trace_seed(const TraceGenerator& gen, double horizon, const TraceTarget& target,
                                std::uint64_t seed_start = 0, int max_tries = 1000000);

/// CSV with header "onset_s,duration_s" and a leading "# horizon_s=..." comment.
std::string trace_to_csv(const DoSTrace& trace);
/// Parses trace_to_csv output. horizon_override wins over the comment; with
/// neither, the horizon is the last interval end.
DoSTrace trace_from_csv(const std::string& text, std::optional<double> horizon_override = std::nullopt);

}  // namespace qncs
