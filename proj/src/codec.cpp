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

#include "qncs/codec.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qncs/errors.hpp"

namespace qncs {

namespace {

bool same_bits(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

std::string dump(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << "]";
  return os.str();
}

}  // namespace

bool CodecState::operator==(const CodecState& o) const {
  return t == o.t && bits == o.bits && same_bits(xhat, o.xhat) && same_bits(J, o.J);
}

Codec::Codec(TransformedSystem sys, double substep)
    : sys_(std::move(sys)), substep_(substep), owner_(sys_.structure().element_blocks()) {
  if (!(substep_ > 0.0)) throw std::invalid_argument("codec substep must be > 0");
  feedback_bar_ = sys_.S() * sys_.plant().B * sys_.plant().K * sys_.S_inv();
}

std::vector<int> Codec::element_bits(const std::vector<int>& block_bits) const {
  if (block_bits.size() != sys_.structure().blocks.size()) {
    throw ConfigError("expected " + std::to_string(sys_.structure().blocks.size()) + " per-block bit counts, got " +
                      std::to_string(block_bits.size()));
  }
  std::vector<int> out(owner_.size());
  for (std::size_t l = 0; l < owner_.size(); ++l) {
    const int b = block_bits[static_cast<std::size_t>(owner_[l])];
    if (b < 0 || b > kMaxBits) throw ConfigError("bit count " + std::to_string(b) + " outside [0, 52]");
    out[l] = b;
  }
  return out;
}

CodecState Codec::init(const std::vector<int>& block_bits, const Vector& xbar0, const Vector& j0) const {
  const auto n = static_cast<Eigen::Index>(sys_.nx());
  if (xbar0.size() != n || j0.size() != n) throw ConfigError("initial state and range must have nx entries");
  for (Eigen::Index l = 0; l < n; ++l) {
    if (!std::isfinite(j0(l)) || !(j0(l) > std::abs(xbar0(l)))) {
      throw ConfigError("initial range must strictly dominate |xbar(0)| at element " + std::to_string(l));
    }
  }
  return {Vector::Zero(n), j0, 0.0, element_bits(block_bits)};
}

CodecState Codec::with_block_bits(CodecState state, const std::vector<int>& block_bits) const {
  state.bits = element_bits(block_bits);
  return state;
}

Vector Codec::predictor_rhs(double t, const Vector& x) const {
  if (sys_.time_invariant()) return sys_.Abar() * x + feedback_bar_ * x;
  const Matrix E = eval_E(sys_.structure(), t);
  return sys_.Abar() * x + E * (feedback_bar_ * (E.transpose() * x));
}

CodecState Codec::propagate(const CodecState& state, double dt) const {
  if (dt < 0.0) throw std::invalid_argument("propagate needs dt >= 0");
  if (dt == 0.0) return state;
  CodecState out = state;
  out.J = eval_expAbar(sys_.structure().blocks, dt) * state.J;

  const int steps = std::max(1, static_cast<int>(std::ceil(dt / substep_ - 1e-9)));
  const double h = dt / steps;
  Vector x = state.xhat;
  for (int k = 0; k < steps; ++k) {
    const double t = state.t + k * h;
    const Vector k1 = predictor_rhs(t, x);
    const Vector k2 = predictor_rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = predictor_rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = predictor_rhs(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  out.xhat = x;
  out.t = state.t + dt;
  return out;
}

EncodeResult Codec::on_successful_tx(const CodecState& state, const Vector& xbar_true) const {
  if (xbar_true.size() != state.xhat.size()) throw std::invalid_argument("xbar_true has wrong dimension");
  return encode_error(state, state.xhat - xbar_true);
}

EncodeResult Codec::encode_error(const CodecState& state, const Vector& error) const {
  const auto n = state.xhat.size();
  if (error.size() != n) throw std::invalid_argument("error has wrong dimension");
  EncodeResult res{state, {}, error, Vector::Zero(n)};
  res.codewords.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index l = 0; l < n; ++l) {
    const double j = state.J(l);
    const double e = res.error(l);
    const double chi = (e == 0.0) ? 0.0 : e / j;
    try {
      res.codewords.push_back(encode(chi, state.bits[static_cast<std::size_t>(l)]));
    } catch (const InvariantBreach& ex) {
      std::ostringstream os;
      os.precision(17);
      os << ex.what() << " at element " << l << ", t = " << state.t << "; e = " << dump(res.error)
         << ", J = " << dump(state.J) << ", xhat = " << dump(state.xhat);
      throw InvariantBreach(os.str());
    }
  }
  res.state = on_codewords(state, res.codewords);
  for (Eigen::Index l = 0; l < n; ++l) res.phi(l) = state.J(l) * decode(res.codewords[static_cast<std::size_t>(l)]);
  return res;
}

CodecState Codec::on_codewords(const CodecState& state, std::span<const Codeword> codewords) const {
  const auto n = state.xhat.size();
  if (static_cast<Eigen::Index>(codewords.size()) != n) {
    throw InvariantBreach("received " + std::to_string(codewords.size()) + " codewords for " + std::to_string(n) +
                          " elements");
  }
  CodecState out = state;
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto& cw = codewords[static_cast<std::size_t>(l)];
    const int bits = state.bits[static_cast<std::size_t>(l)];
    if (cw.bits != bits) {
      throw InvariantBreach("codeword bit count " + std::to_string(cw.bits) + " differs from local budget " +
                            std::to_string(bits) + " at element " + std::to_string(l));
    }
    out.xhat(l) = std::fma(-state.J(l), decode(cw), state.xhat(l));
    out.J(l) = std::ldexp(state.J(l), -bits);
  }
  return out;
}

Vector Codec::control_input(const Vector& xhat, double t) const { return sys_.Kbar(t) * xhat; }

Vector Codec::control_input(const CodecState& state) const { return control_input(state.xhat, state.t); }

}  // namespace qncs
