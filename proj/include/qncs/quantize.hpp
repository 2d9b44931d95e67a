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

namespace qncs {

/// Largest bit count whose quantisation grid is exact in a double.
inline constexpr int kMaxBits = 52;

/// Inputs within this distance outside [-1, 1] are treated as roundoff and
/// clamped; anything further is an overflow.
inline constexpr double kOverflowSlack = 1e-12;

/// Offset-binary cell index of a quantised value.
struct Codeword {
  std::uint64_t index = 0;
  int bits = 0;

  bool operator==(const Codeword&) const = default;
};

/// Uniform mid-point quantiser on [-1, 1] with 2^bits cells. bits == 0
/// always yields 0. Throws InvariantBreach on overflow and
/// std::invalid_argument for bits outside [0, kMaxBits].
double quantize(double chi, int bits);

Codeword encode(double chi, int bits);
double decode(const Codeword& cw);

/// j / 2^bits: the worst-case error |e - j q(e/j)| for |e| <= j.
double error_bound(double j, int bits);

}  // namespace qncs
