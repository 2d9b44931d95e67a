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

#include "qncs/dos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qncs/errors.hpp"
#include "qncs/text.hpp"

namespace qncs {

namespace {

std::string num(double v) { return text::format_double(v); }

// Relative slack for the assumption inequalities; fitted parameters bind
// with equality and must not fail on the last ulp.
bool within(double lhs, double rhs) { return lhs <= rhs + 1e-9 * (1.0 + std::abs(rhs)); }

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

DoSTrace::DoSTrace(std::vector<DoSInterval> intervals, double horizon)
    : intervals_(std::move(intervals)), horizon_(horizon) {
  if (!std::isfinite(horizon_) || horizon_ < 0.0) throw ConfigError("trace horizon must be finite and >= 0");
  prefix_.reserve(intervals_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    const std::string where = "DoS interval " + std::to_string(i);
    if (!std::isfinite(iv.h) || !std::isfinite(iv.tau) || iv.h < 0.0 || iv.tau < 0.0) {
      throw ConfigError(where + ": onset and duration must be finite and >= 0");
    }
    if (iv.end() > horizon_ + kTimeEps) {
      throw ConfigError(where + " ends at " + num(iv.end()) + " beyond horizon " + num(horizon_));
    }
    if (i > 0 && !(intervals_[i - 1].end() < iv.h)) {
      throw ConfigError(where + " starts at " + num(iv.h) + " before the previous interval ended");
    }
    prefix_.push_back(acc);
    acc += iv.tau;
  }
}

bool DoSTrace::blocks(double t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t + kTimeEps,
                             [](double v, const DoSInterval& iv) { return v < iv.h; });
  if (it == intervals_.begin()) return false;
  const auto& iv = *std::prev(it);
  return std::abs(t - iv.h) <= kTimeEps || t < iv.end() - kTimeEps;
}

void DoSTrace::check_window(double a, double b) const {
  if (!(a >= 0.0 && a <= b && b <= horizon_ + kTimeEps)) {
    throw std::out_of_range("window [" + num(a) + ", " + num(b) + "] outside [0, " + num(horizon_) + "]");
  }
}

int DoSTrace::count_transitions(double a, double b) const {
  check_window(a, b);
  auto lo = std::lower_bound(intervals_.begin(), intervals_.end(), a,
                             [](const DoSInterval& iv, double v) { return iv.h < v; });
  auto hi = std::upper_bound(intervals_.begin(), intervals_.end(), b,
                             [](double v, const DoSInterval& iv) { return v < iv.h; });
  return static_cast<int>(std::max<std::ptrdiff_t>(0, hi - lo));
}

double DoSTrace::cumulative(double x) const {
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), x,
                             [](const DoSInterval& iv, double v) { return iv.h < v; });
  if (it == intervals_.begin()) return 0.0;
  const auto i = static_cast<std::size_t>(std::prev(it) - intervals_.begin());
  return prefix_[i] + std::min(intervals_[i].tau, x - intervals_[i].h);
}

double DoSTrace::dos_duration(double a, double b) const {
  check_window(a, b);
  return std::max(0.0, cumulative(b) - cumulative(a));
}

void DoSParams::validate() const {
  if (!(eta >= 0.0) || !(kappa >= 0.0) || !(tau_D > 0.0) || !(T > 1.0)) {
    throw ConfigError("DoS parameters need eta >= 0, kappa >= 0, tau_D > 0, T > 1");
  }
}

std::vector<double> candidate_points(const DoSTrace& trace, double grid) {
  std::vector<double> pts{0.0, trace.horizon()};
  for (const auto& iv : trace.intervals()) {
    pts.push_back(iv.h);
    pts.push_back(std::min(iv.end(), trace.horizon()));
  }
  if (grid > 0.0) {
    const int n = static_cast<int>(std::floor(trace.horizon() / grid + kTimeEps));
    for (int k = 0; k <= n; ++k) pts.push_back(std::min(k * grid, trace.horizon()));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

AdmissibilityResult check_admissible(const DoSTrace& trace, const DoSParams& params, double grid) {
  if (!(grid > 0.0)) throw std::invalid_argument("admissibility grid must be > 0");
  const auto pts = candidate_points(trace, grid);
  // Report the window with the largest excess; frequency before duration.
  AdmissibilityResult freq{true, 0.0, 0.0, "frequency"};
  AdmissibilityResult dur{true, 0.0, 0.0, "duration"};
  double freq_excess = 0.0;
  double dur_excess = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      const double tau = pts[i];
      const double t = pts[j];
      const double span = t - tau;
      const double n = trace.count_transitions(tau, t);
      const double n_cap = params.eta + span / params.tau_D;
      if (!within(n, n_cap) && (freq.ok || n - n_cap > freq_excess)) {
        freq = {false, tau, t, "frequency"};
        freq_excess = n - n_cap;
      }
      const double d = trace.dos_duration(tau, t);
      const double d_cap = params.kappa + span / params.T;
      if (!within(d, d_cap) && (dur.ok || d - d_cap > dur_excess)) {
        dur = {false, tau, t, "duration"};
        dur_excess = d - d_cap;
      }
    }
  }
  if (!freq.ok) return freq;
  if (!dur.ok) return dur;
  return {};
}

DoSParams fit_params(const DoSTrace& trace, double eta, double kappa, double grid) {
  if (!(eta >= 0.0) || !(kappa >= 0.0)) throw std::invalid_argument("eta and kappa must be >= 0");
  DoSParams out{eta, kInfinity, kappa, kInfinity};
  if (trace.empty()) return out;
  if (eta < 1.0) {
    throw std::invalid_argument("eta = " + num(eta) + " < 1 cannot cover a single off/on transition");
  }
  const auto pts = candidate_points(trace, grid);
  double freq_rate = 0.0;
  double dur_rate = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double span = pts[j] - pts[i];
      freq_rate = std::max(freq_rate, (trace.count_transitions(pts[i], pts[j]) - eta) / span);
      dur_rate = std::max(dur_rate, (trace.dos_duration(pts[i], pts[j]) - kappa) / span);
    }
  }
  if (freq_rate > 0.0) out.tau_D = 1.0 / freq_rate;
  if (dur_rate > 0.0) out.T = 1.0 / dur_rate;
  if (!(out.T > 1.0)) {
    throw std::invalid_argument("kappa = " + num(kappa) + " too small: fitted T = " + num(out.T) + " <= 1");
  }
  return out;
}

DoSParams average_params(const DoSTrace& trace) {
  DoSParams out;
  const double h = trace.horizon();
  const int n = trace.count_transitions(0.0, h);
  const double dur = trace.dos_duration(0.0, h);
  if (n > 0) out.tau_D = h / n;
  if (dur > 0.0) out.T = h / dur;
  return out;
}

double bound_Q(const DoSParams& params, double delta) {
  const double slack = 1.0 - params.level(delta);
  if (!(slack > 0.0)) {
    throw DosBudgetExceeded("DoS exceeds stabilizable budget: 1/T + delta/tau_D = " + num(params.level(delta)) +
                            " >= 1");
  }
  const double num_ = params.kappa + params.eta * delta;
  return num_ == 0.0 ? 0.0 : num_ / slack;
}

double min_successes(const DoSParams& params, double delta, double z0, double zm) {
  if (zm < z0) throw std::invalid_argument("min_successes needs zm >= z0");
  return (1.0 - params.level(delta)) / delta * (zm - z0) - (params.kappa + params.eta * delta) / delta;
}

int attempt_count(double horizon, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  return static_cast<int>(std::floor(horizon / delta + kTimeEps)) + 1;
}

std::vector<double> successful_instants(const DoSTrace& trace, double delta) {
  const int n = attempt_count(trace.horizon(), delta);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = k * delta;
    if (!trace.blocks(t)) out.push_back(t);
  }
  return out;
}

void TraceGenerator::validate() const {
  const bool ok = std::isfinite(period_min) && std::isfinite(period_max) && period_min > 0.0 &&
                  period_min <= period_max && duty_min >= 0.0 && duty_min <= duty_max && duty_max <= 1.0 &&
                  std::isfinite(phase) && phase >= 0.0;
  if (!ok) {
    throw ConfigError("generator needs 0 < period_min <= period_max, 0 <= duty_min <= duty_max <= 1, phase >= 0");
  }
}

DoSTrace generate_trace(const TraceGenerator& gen, double horizon, std::uint64_t seed) {
  gen.validate();
  Uniform draw(seed);
  std::vector<DoSInterval> out;
  double start = gen.phase;
  while (start < horizon) {
    const double period = draw(gen.period_min, gen.period_max);
    const double duty = draw(gen.duty_min, gen.duty_max);
    const double end = std::min(start + duty * period, horizon);
    if (end > start) {
      if (!out.empty() && start <= out.back().end()) {
        out.back().tau = end - out.back().h;
      } else {
        out.push_back({start, end - start});
      }
    }
    start += period;
  }
  return DoSTrace(std::move(out), horizon);
}

DoSTrace generate_level_trace(const LevelTraceGenerator& gen, double level, double delta, double horizon,
                              std::uint64_t seed) {
  if (!(level >= 0.0) || !std::isfinite(level)) throw std::invalid_argument("DoS level must be finite and >= 0");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(gen.period_min > 0.0) || gen.period_max < gen.period_min) {
    throw std::invalid_argument("level trace generator needs 0 < period_min <= period_max");
  }
  if (level == 0.0) return DoSTrace({}, horizon);
  const double stretch = std::max(1.0, 2.0 * delta / (level * gen.period_min));
  const double pmin = gen.period_min * stretch;
  const double pmax = gen.period_max * stretch;
  Uniform draw(seed);
  std::vector<DoSInterval> out;
  double start = draw(0.0, pmin);
  while (start < horizon) {
    const double period = draw(pmin, pmax);
    const double end = std::min(start + level * period - delta, horizon);
    if (end > start) {
      if (!out.empty() && start <= out.back().end()) {
        out.back().tau = end - out.back().h;
      } else {
        out.push_back({start, end - start});
      }
    }
    start += period;
  }
  return DoSTrace(std::move(out), horizon);
}

std::uint64_t search_trace_seed(const TraceGenerator& gen, double horizon, const TraceTarget& target,
                                std::uint64_t seed_start, int max_tries) {
  for (int i = 0; i < max_tries; ++i) {
    const std::uint64_t seed = seed_start + static_cast<std::uint64_t>(i);
    const DoSTrace tr = generate_trace(gen, horizon, seed);
    if (tr.count_transitions(0.0, horizon) == target.count &&
        std::abs(tr.dos_duration(0.0, horizon) - target.duration) <= target.duration_tol) {
      return seed;
    }
  }
  throw std::runtime_error("no seed matched the trace target within " + std::to_string(max_tries) + " tries");
}

std::string trace_to_csv(const DoSTrace& trace) {
  std::string out = "# horizon_s=" + num(trace.horizon()) + "\nonset_s,duration_s\n";
  for (const auto& iv : trace.intervals()) {
    out += num(iv.h);
    out += ',';
    out += num(iv.tau);
    out += '\n';
  }
  return out;
}

DoSTrace trace_from_csv(const std::string& content, std::optional<double> horizon_override) {
  std::optional<double> horizon;
  bool header_seen = false;
  std::vector<DoSInterval> intervals;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = text::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      constexpr std::string_view key = "horizon_s=";
      const auto pos = s.find(key);
      if (pos != std::string_view::npos) {
        horizon = text::parse_double(s.substr(pos + key.size()));
        if (!horizon) throw ConfigError("trace line " + std::to_string(lineno) + ": bad horizon comment");
      }
      continue;
    }
    if (!header_seen) {
      if (s != "onset_s,duration_s") {
        throw ConfigError("trace line " + std::to_string(lineno) + ": expected header 'onset_s,duration_s'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = text::split(s, ',');
    std::optional<double> h;
    std::optional<double> tau;
    if (fields.size() == 2) {
      h = text::parse_double(fields[0]);
      tau = text::parse_double(fields[1]);
    }
    if (!h || !tau) throw ConfigError("trace line " + std::to_string(lineno) + ": expected two numbers");
    intervals.push_back({*h, *tau});
  }
  if (!header_seen) throw ConfigError("trace CSV has no header");
  double hz = 0.0;
  if (horizon_override) {
    hz = *horizon_override;
  } else if (horizon) {
    hz = *horizon;
  } else if (!intervals.empty()) {
    hz = intervals.back().end();
  }
  return DoSTrace(std::move(intervals), hz);
}

}  // namespace qncs
