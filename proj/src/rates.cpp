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

#include "qncs/rates.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qncs/errors.hpp"
#include "qncs/text.hpp"

namespace qncs {

double min_rate_threshold(double c, double delta, double level) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(level < 1.0)) {
    throw DosBudgetExceeded("DoS exceeds stabilizable budget: 1/T + delta/tau_D = " + text::format_double(level) +
                            " >= 1");
  }
  if (c < 0.0) return 0.0;
  return c * delta * kLog2E / (1.0 - level);
}

double min_rate_threshold(double c, double delta, const DoSParams& params) {
  return min_rate_threshold(c, delta, params.level(delta));
}

double robustness_margin(int R, double c, double delta) {
  if (c < 0.0) return 1.0;
  if (R <= 0) throw std::invalid_argument("robustness margin needs R > 0 for a block with c >= 0");
  return 1.0 - c * delta * kLog2E / R;
}

bool rate_satisfies(int R, double c, double delta, double level) {
  if (R < 0) return false;
  const double thr = min_rate_threshold(c, delta, level);
  return c < 0.0 ? true : R > thr;
}

int select_rate(double c, double delta, double level, int guard) {
  const double thr = min_rate_threshold(c, delta, level);
  if (c < 0.0) return guard;
  int R = static_cast<int>(std::ceil(thr));
  if (!(R > thr)) ++R;
  return R + guard;
}

RateAssignment select_rates(const BlockStructure& structure, double delta, const DoSParams& params, int guard) {
  RateAssignment out;
  for (const auto& b : structure.blocks) out.R.push_back(select_rate(b.c, delta, params.level(delta), guard));
  return out;
}

DecayCertificate decay_certificate(const RateAssignment& assignment, const BlockStructure& structure, double delta,
                                   const DoSParams& params) {
  if (assignment.R.size() != structure.blocks.size()) {
    throw std::invalid_argument("rate assignment does not match block count");
  }
  const double level = params.level(delta);
  min_rate_threshold(0.0, delta, level);  // budget check
  DecayCertificate cert;
  cert.valid = true;
  for (std::size_t r = 0; r < structure.blocks.size(); ++r) {
    const double c = structure.blocks[r].c;
    const double R = assignment.R[r];
    const double alpha = std::exp(c - std::log(2.0) * R * (1.0 - level) / delta);
    const double theta = std::exp2(R * (params.kappa + params.eta * delta) / delta);
    cert.alpha.push_back(alpha);
    cert.theta.push_back(theta);
    if (c >= 0.0 && !(alpha < 1.0)) cert.valid = false;
  }
  return cert;
}

double avg_rate_received(std::span<const double> success_times, std::span<const int> success_bits, double z0,
                         double zm) {
  if (!(zm > z0)) throw std::invalid_argument("average rate needs a non-empty window");
  if (success_times.size() != success_bits.size()) throw std::invalid_argument("times and bits differ in length");
  long long total = 0;
  for (std::size_t i = 0; i < success_times.size(); ++i) {
    if (success_times[i] >= z0 && success_times[i] < zm) total += success_bits[i];
  }
  return static_cast<double>(total) / (zm - z0);
}

double avg_rate_attempted(const RateAssignment& assignment, const BlockStructure& structure, double delta) {
  if (assignment.R.size() != structure.blocks.size()) {
    throw std::invalid_argument("rate assignment does not match block count");
  }
  long long per_attempt = 0;
  for (std::size_t r = 0; r < structure.blocks.size(); ++r) {
    per_attempt += static_cast<long long>(assignment.R[r]) * structure.blocks[r].dim();
  }
  return static_cast<double>(per_attempt) / delta;
}

std::vector<bool> check_average_rate(std::span<const int> history, double c, double delta, const DoSParams& params) {
  const double thr = min_rate_threshold(c, delta, params);
  std::vector<bool> out;
  out.reserve(history.size());
  long long sum = 0;
  for (std::size_t m = 1; m <= history.size(); ++m) {
    sum += history[m - 1];
    const double mean = static_cast<double>(sum) / static_cast<double>(m);
    out.push_back(c >= 0.0 ? mean > thr : mean >= 0.0);
  }
  return out;
}

}  // namespace qncs
