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

// Bit-rate bounds for exponential stability under DoS.
//
// For a block with real part c, sampling interval delta and DoS level
// L = 1/T + delta/tau_D < 1, any integer rate
//   R > c delta log2(e) / (1 - L)   (c >= 0),   R >= 0   (c < 0)
// makes the quantisation range contract along successful transmissions.

#pragma once

#include <span>
#include <vector>

#include "qncs/dos.hpp"
#include "qncs/model.hpp"

namespace qncs {

inline constexpr double kLog2E = 1.4426950408889634;

struct RateAssignment {
  std::vector<int> R;  // per block
};

struct DecayCertificate {
  std::vector<double> alpha;
  std::vector<double> theta;
  bool valid = false;  // alpha_r < 1 on every block with c_r >= 0
};

/// Throws DosBudgetExceeded when level >= 1.
double min_rate_threshold(double c, double delta, double level);
double min_rate_threshold(double c, double delta, const DoSParams& params);

/// Largest admissible DoS level for a given rate: 1 - c delta log2(e) / R
/// (c >= 0), 1 (c < 0). Throws std::invalid_argument for R == 0 with c >= 0.
double robustness_margin(int R, double c, double delta);

/// True iff the integer rate satisfies the threshold condition for block c.
bool rate_satisfies(int R, double c, double delta, double level);

/// Smallest integer strictly above the threshold (c >= 0) or 0 (c < 0),
/// plus guard.
int select_rate(double c, double delta, double level, int guard = 0);

RateAssignment select_rates(const BlockStructure& structure, double delta, const DoSParams& params, int guard = 0);

/// alpha_r = e^{c_r} / 2^{R_r (1 - L) / delta}, theta_r = 2^{R_r (kappa + eta delta) / delta}.
DecayCertificate decay_certificate(const RateAssignment& assignment, const BlockStructure& structure, double delta,
                                   const DoSParams& params);

/// Delivered bits per second over [z0, zm): sum of bits of successes in the
/// window divided by its length.
double avg_rate_received(std::span<const double> success_times, std::span<const int> success_bits, double z0,
                         double zm);

/// Attempted bits per second: sum over elements of the per-element rate / delta.
double avg_rate_attempted(const RateAssignment& assignment, const BlockStructure& structure, double delta);

/// Entry m-1 is true iff the mean of the first m bit counts meets the
/// threshold (strictly for c >= 0).
std::vector<bool> check_average_rate(std::span<const int> history, double c, double delta, const DoSParams& params);

}  // namespace qncs
