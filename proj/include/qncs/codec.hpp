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

#include <span>
#include <vector>

#include "qncs/model.hpp"
#include "qncs/quantize.hpp"

namespace qncs {

/// State shared (by construction, not by communication) between the encoder
/// and the decoder. All vectors live in bar coordinates.
struct CodecState {
  Vector xhat;  // prediction of xbar
  Vector J;     // quantisation range, dominates |xhat - xbar| elementwise
  double t = 0.0;
  std::vector<int> bits;  // per-element bit count for the next transmission

  /// Bitwise equality, used for the encoder/decoder mirroring check.
  bool operator==(const CodecState& o) const;
};

struct EncodeResult {
  CodecState state;
  std::vector<Codeword> codewords;
  Vector error;  // e = xhat - xbar before the jump
  Vector phi;    // correction subtracted from xhat (and from e)
};

/// Predictor / range dynamics in bar coordinates:
///   xhat' = Abar xhat + Bbar(t) Kbar(t) xhat,  J' = Abar J        between transmissions
///   xhat  = xhat- - Phi (fused multiply-add),                       J  = H J-          at successful transmissions
/// with Phi_l = j_l q(e_l / j_l) and H = diag(2^-bits).
class Codec {
 public:
  /// substep bounds the RK4 step used for the predictor flow.
  Codec(TransformedSystem sys, double substep);

  [[nodiscard]] const TransformedSystem& system() const { return sys_; }
  [[nodiscard]] double substep() const { return substep_; }

  /// Per-element bit counts from per-block counts.
  [[nodiscard]] std::vector<int> element_bits(const std::vector<int>& block_bits) const;

  /// Requires j0_l > |xbar0_l| for every l.
  [[nodiscard]] CodecState init(const std::vector<int>& block_bits, const Vector& xbar0, const Vector& j0) const;

  [[nodiscard]] CodecState with_block_bits(CodecState state, const std::vector<int>& block_bits) const;

  /// Flows the state over [t, t + dt] with no transmission inside.
  [[nodiscard]] CodecState propagate(const CodecState& state, double dt) const;

  /// Encoder side of a successful transmission at state.t.
  [[nodiscard]] EncodeResult on_successful_tx(const CodecState& state, const Vector& xbar_true) const;
  /// Same, given the prediction error e = xhat - xbar directly.
  [[nodiscard]] EncodeResult encode_error(const CodecState& state, const Vector& error) const;

  /// Decoder side: applies the received codewords only.
  [[nodiscard]] CodecState on_codewords(const CodecState& state, std::span<const Codeword> codewords) const;

  /// u = K S^-1 E(t)^-1 xhat at the state's own time.
  [[nodiscard]] Vector control_input(const CodecState& state) const;
  [[nodiscard]] Vector control_input(const Vector& xhat, double t) const;

  /// Predictor vector field Abar x + Bbar(t) Kbar(t) x.
  [[nodiscard]] Vector predictor_rhs(double t, const Vector& x) const;

 private:
  TransformedSystem sys_;
  double substep_;
  std::vector<int> owner_;
  Matrix feedback_bar_;  // S B K S^-1
};

}  // namespace qncs
