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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qncs/codec.hpp"
#include "qncs/dos.hpp"
#include "qncs/model.hpp"
#include "qncs/tvr.hpp"

namespace qncs {

enum class ProtocolKind { TimeInvariant, TimeVarying };

const char* to_string(ProtocolKind kind);

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::TimeInvariant;
  std::vector<int> R;     // per block; R_max for the time-varying protocol
  std::vector<double> w;  // time-varying only; empty means c_r + 1
};

struct SimConfig {
  PlantSpec plant;
  BlockStructure structure;
  DoSTrace trace;
  ProtocolConfig protocol;
  double delta = 0.1;
  double horizon = 20.0;
  int substeps = 20;  // integration substeps per transmission interval
  Vector x0;
  double j_margin = 1.0;  // j(0) = |xbar(0)| + j_margin
  /// Used only to warn about rates below the stability threshold.
  std::optional<DoSParams> dos_params;
  bool record_trajectory = true;

  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  Vector x;
  Vector xhat;
  Vector e;
  Vector J;
  bool dos_active = false;
  bool attempt = false;
  bool success = false;
  int bits = 0;  // bits carried by this attempt (0 off-attempt)
};

struct TxRecord {
  double t = 0.0;
  bool success = false;
  std::vector<int> block_bits;
  int total_bits = 0;
  std::vector<Codeword> codewords;  // empty on failure
  std::vector<int> clock_g;         // time-varying only
  std::vector<bool> rolled;         // time-varying only
};

struct SuccessRecord {
  double t = 0.0;
  std::vector<int> block_bits;
  Vector J_after;  // J(z_m) after the jump
};

enum class Verdict { Converged, Diverged, Inconclusive };

const char* to_string(Verdict v);

struct SimTotals {
  int attempts = 0;
  int successes = 0;
  long long bits_attempted = 0;
  long long bits_delivered = 0;
};

struct DecayFit {
  double exponent = 0.0;  // 1/s
  double r2 = 0.0;
};

struct SimResult {
  std::vector<TrajectorySample> trajectory;
  std::vector<double> sample_t;  // always recorded
  std::vector<double> sample_norm;
  std::vector<double> sample_J_norm;
  std::vector<TxRecord> log;
  std::vector<SuccessRecord> successes;
  std::vector<ClockPeriod> clock_periods;
  SimTotals totals;
  Verdict verdict = Verdict::Inconclusive;
  DecayFit fit;
  double x0_norm = 0.0;
  double final_norm = 0.0;
  double end_time = 0.0;
  double max_error_ratio = 0.0;  // max over samples of |e_l| / j_l
  std::string stop_reason;       // empty when the horizon was reached
  std::vector<std::string> warnings;
};

/// Relative slack of the |e_l| <= j_l check (integration and rounding).
inline constexpr double kOverflowCheckSlack = 1e-9;

/// Attempts at k * delta for k * delta < horizon.
int sim_attempt_count(double horizon, double delta);

/// Closed-loop event-driven run. Throws InvariantBreach on quantiser
/// overflow or encoder/decoder desynchronisation.
SimResult run(const SimConfig& config);

/// Least-squares slope of log(norm) against t over the second half of the
/// time span. Needs at least 10 samples.
DecayFit decay_fit(std::span<const double> t, std::span<const double> norms);

struct ProtocolComparison {
  SimResult time_invariant;
  SimResult time_varying;
};

/// Runs both protocols on the same trace with protocol.R as (maximum) rates.
ProtocolComparison compare_protocols(const SimConfig& config);

}  // namespace qncs
