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

#include "qncs/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qncs/errors.hpp"

namespace qncs {

namespace {

void check_bits(int bits) {
  if (bits < 0 || bits > kMaxBits) {
    throw std::invalid_argument("bit count " + std::to_string(bits) + " outside [0, 52]");
  }
}

double checked_input(double chi) {
  if (!(std::abs(chi) <= 1.0 + kOverflowSlack)) {
    std::ostringstream os;
    os.precision(17);
    os << "quantizer overflow: |chi| = " << std::abs(chi) << " > 1";
    throw InvariantBreach(os.str());
  }
  return std::clamp(chi, -1.0, 1.0);
}

}  // namespace

double quantize(double chi, int bits) {
  check_bits(bits);
  chi = checked_input(chi);
  if (bits == 0) return 0.0;
  const double half = std::ldexp(1.0, bits - 1);
  if (chi == 1.0) return 1.0 - 0.5 / half;
  return (std::floor(half * chi) + 0.5) / half;
}

Codeword encode(double chi, int bits) {
  check_bits(bits);
  chi = checked_input(chi);
  if (bits == 0) return {0, 0};
  const std::int64_t half = std::int64_t{1} << (bits - 1);
  const std::int64_t top = 2 * half - 1;
  std::int64_t index = top;
  if (chi < 1.0) {
    index = static_cast<std::int64_t>(std::floor(static_cast<double>(half) * chi)) + half;
    index = std::min(index, top);
  }
  return {static_cast<std::uint64_t>(index), bits};
}

double decode(const Codeword& cw) {
  check_bits(cw.bits);
  if (cw.bits == 0) return 0.0;
  const std::int64_t half = std::int64_t{1} << (cw.bits - 1);
  if (cw.index >= static_cast<std::uint64_t>(2 * half)) {
    throw std::invalid_argument("codeword index out of range for its bit count");
  }
  const auto cell = static_cast<std::int64_t>(cw.index) - half;
  return (static_cast<double>(cell) + 0.5) / static_cast<double>(half);
}

double error_bound(double j, int bits) {
  check_bits(bits);
  return std::ldexp(j, -bits);
}

}  // namespace qncs
