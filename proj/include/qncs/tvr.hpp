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

// Time-varying bit-rate protocol.
//
// Each Jordan block keeps a clock s_{g-1}. Before an attempt at t_k the
// encoder and decoder both evaluate, assuming the attempt will succeed,
//   rho = e^{c (t_k - s_{g-1})} / (2^{R_max})^{successes since s_{g-1} + 1}.
// If rho < 1 the attempt carries min(ceil(w (t_k - s_{g-1}) log2 e), R_max)
// bits, otherwise R_max. A success at which the same ratio (with the
// updated success count) drops below one becomes the next clock instant.

#pragma once

#include <vector>

#include "qncs/model.hpp"

namespace qncs {

struct BlockClock {
  double s_prev = 0.0;
  int successes_since = 0;
  int g = 0;
  bool started = false;  // false until the first successful transmission

  bool operator==(const BlockClock&) const = default;
};

struct TvrConfig {
  std::vector<int> R_max;  // per block
  std::vector<double> w;   // per block, w_r > c_r

  /// Throws ConfigError on size mismatch or w_r <= c_r.
  void validate(const BlockStructure& structure) const;
  /// w_r = c_r + 1 for every block.
  static TvrConfig with_default_growth(std::vector<int> R_max, const BlockStructure& structure);
};

/// Bits for an attempt at tk. Before the clock starts this is R_max.
int next_bit_budget(const BlockClock& clock, int R_max, double w, double c, double tk);

struct ClockUpdate {
  BlockClock clock;
  bool rolled = false;
};

/// Accounts a success at zm. The first success starts the clock (s_0 = zm).
ClockUpdate on_success_update_clock(const BlockClock& clock, int R_max, double c, double zm);

/// Successes and their bit counts in ]s_start, s_end].
struct ClockPeriod {
  int block = 0;
  double s_start = 0.0;
  double s_end = 0.0;
  std::vector<int> bits;
};

/// Eigenvalue of the period's range transition matrix:
/// e^{c (s_end - s_start)} / prod 2^{bits}. Throws std::invalid_argument for an
/// incomplete period (no successes or s_end <= s_start).
double spectral_check(const ClockPeriod& period, double c);

/// All block clocks of one side (encoder or decoder).
class TvrScheduler {
 public:
  TvrScheduler(TvrConfig cfg, std::vector<JordanBlock> blocks);

  [[nodiscard]] std::vector<int> budgets(double tk) const;

  struct SuccessReport {
    std::vector<bool> rolled;
    std::vector<ClockPeriod> completed;
  };
  SuccessReport on_success(double zm, const std::vector<int>& bits_used);

  [[nodiscard]] const std::vector<BlockClock>& clocks() const { return clocks_; }
  [[nodiscard]] const TvrConfig& config() const { return cfg_; }

  bool operator==(const TvrScheduler& o) const { return clocks_ == o.clocks_ && open_bits_ == o.open_bits_; }

 private:
  TvrConfig cfg_;
  std::vector<JordanBlock> blocks_;
  std::vector<BlockClock> clocks_;
  std::vector<std::vector<int>> open_bits_;
};

}  // namespace qncs
