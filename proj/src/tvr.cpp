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

#include "qncs/tvr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qncs/errors.hpp"
#include "qncs/rates.hpp"

namespace qncs {

namespace {

// log2 of e^{c gap} / (2^{R_max})^{count}
double log2_ratio(double c, double gap, int R_max, int count) {
  return c * gap * kLog2E - static_cast<double>(R_max) * count;
}

}  // namespace

void TvrConfig::validate(const BlockStructure& structure) const {
  const auto p = structure.blocks.size();
  if (R_max.size() != p || w.size() != p) {
    throw ConfigError("time-varying protocol needs one R_max and one w per block (" + std::to_string(p) + ")");
  }
  for (std::size_t r = 0; r < p; ++r) {
    if (R_max[r] < 0) throw ConfigError("R_max must be >= 0");
    if (!(w[r] > structure.blocks[r].c)) {
      throw ConfigError("w[" + std::to_string(r) + "] must exceed the block's real part");
    }
  }
}

TvrConfig TvrConfig::with_default_growth(std::vector<int> R_max, const BlockStructure& structure) {
  TvrConfig cfg{std::move(R_max), {}};
  for (const auto& b : structure.blocks) cfg.w.push_back(b.c + 1.0);
  return cfg;
}

int next_bit_budget(const BlockClock& clock, int R_max, double w, double c, double tk) {
  if (!clock.started) return R_max;
  const double gap = tk - clock.s_prev;
  if (!(gap > 0.0)) throw std::invalid_argument("attempt must come after the block clock instant");
  if (log2_ratio(c, gap, R_max, clock.successes_since + 1) < 0.0) {
    // Snap values a hair above an integer (e.g. 2.0000000000004) down.
    const double ramp = std::ceil(w * gap * kLog2E - 1e-9);
    return static_cast<int>(std::clamp(ramp, 0.0, static_cast<double>(R_max)));
  }
  return R_max;
}

ClockUpdate on_success_update_clock(const BlockClock& clock, int R_max, double c, double zm) {
  if (!clock.started) return {BlockClock{zm, 0, 0, true}, false};
  BlockClock next = clock;
  next.successes_since += 1;
  if (log2_ratio(c, zm - clock.s_prev, R_max, next.successes_since) < 0.0) {
    next.s_prev = zm;
    next.successes_since = 0;
    next.g += 1;
    return {next, true};
  }
  return {next, false};
}

double spectral_check(const ClockPeriod& period, double c) {
  if (period.bits.empty() || !(period.s_end > period.s_start)) {
    throw std::invalid_argument("spectral check needs a completed clock period");
  }
  double total = 0.0;
  for (int b : period.bits) total += b;
  return std::exp2(c * (period.s_end - period.s_start) * kLog2E - total);
}

TvrScheduler::TvrScheduler(TvrConfig cfg, std::vector<JordanBlock> blocks)
    : cfg_(std::move(cfg)), blocks_(std::move(blocks)), clocks_(blocks_.size()), open_bits_(blocks_.size()) {}

std::vector<int> TvrScheduler::budgets(double tk) const {
  std::vector<int> out(blocks_.size());
  for (std::size_t r = 0; r < blocks_.size(); ++r) {
    out[r] = next_bit_budget(clocks_[r], cfg_.R_max[r], cfg_.w[r], blocks_[r].c, tk);
  }
  return out;
}

TvrScheduler::SuccessReport TvrScheduler::on_success(double zm, const std::vector<int>& bits_used) {
  SuccessReport rep;
  rep.rolled.assign(blocks_.size(), false);
  for (std::size_t r = 0; r < blocks_.size(); ++r) {
    const BlockClock before = clocks_[r];
    const auto upd = on_success_update_clock(before, cfg_.R_max[r], blocks_[r].c, zm);
    if (before.started) open_bits_[r].push_back(bits_used[r]);
    if (upd.rolled) {
      rep.completed.push_back({static_cast<int>(r), before.s_prev, zm, std::move(open_bits_[r])});
      open_bits_[r].clear();
    }
    rep.rolled[r] = upd.rolled;
    clocks_[r] = upd.clock;
  }
  return rep;
}

}  // namespace qncs
