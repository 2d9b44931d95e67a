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

// Straight-line reference computations used as test oracles. None of these
// call into the library's numerical routines: matrix exponentials come from
// Eigen's MatrixFunctions module, window statistics from plain loops.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qncs/dos.hpp"
#include "qncs/model.hpp"

namespace qncs::oracle {

inline const double kLog2E = std::log2(std::exp(1.0));

// Uniform mid-rise quantizer on [-1, 1] with 2^R cells, written as
// cell index arithmetic rather than the library's scaled floor.
inline double quantize(double chi, int R) {
  if (R == 0) return 0.0;
  const double cells = std::ldexp(1.0, R);
  const double width = 2.0 / cells;
  double idx = std::floor((chi + 1.0) / width);
  idx = std::clamp(idx, 0.0, cells - 1.0);
  return -1.0 + (idx + 0.5) * width;
}

inline double threshold(double c, double delta, double level) {
  if (c < 0.0) return 0.0;
  return c * delta * kLog2E / (1.0 - level);
}

inline double margin(int R, double c, double delta) { return 1.0 - c * delta * kLog2E / R; }

inline double level(const DoSParams& p, double delta) {
  const double inv_T = std::isinf(p.T) ? 0.0 : 1.0 / p.T;
  const double inv_tau = std::isinf(p.tau_D) ? 0.0 : delta / p.tau_D;
  return inv_T + inv_tau;
}

inline double Q(const DoSParams& p, double delta) {
  return (p.kappa + p.eta * delta) / (1.0 - level(p, delta));
}

inline double min_successes(const DoSParams& p, double delta, double z0, double zm) {
  return (1.0 - level(p, delta)) / delta * (zm - z0) - (p.kappa + p.eta * delta) / delta;
}

// Real Jordan matrix: complex pairs as [[c, -d], [d, c]].
inline Matrix jordan(const std::vector<JordanBlock>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.d > 0 ? 2 * b.n : b.n;
  Matrix J = Matrix::Zero(n, n);
  int off = 0;
  for (const auto& b : blocks) {
    const int w = b.d > 0 ? 2 : 1;
    for (int i = 0; i < b.n; ++i) {
      const int k = off + w * i;
      J(k, k) = b.c;
      if (w == 2) {
        J(k, k + 1) = -b.d;
        J(k + 1, k) = b.d;
        J(k + 1, k + 1) = b.c;
      }
      if (i + 1 < b.n) {
        for (int q = 0; q < w; ++q) J(k + q, k + w + q) = 1.0;
      }
    }
    off += w * b.n;
  }
  return J;
}

// Rotation-free counterpart: the imaginary parts removed.
inline Matrix bar(const std::vector<JordanBlock>& blocks) {
  Matrix J = jordan(blocks);
  int off = 0;
  for (const auto& b : blocks) {
    if (b.d > 0) {
      for (int i = 0; i < b.n; ++i) {
        const int k = off + 2 * i;
        J(k, k + 1) = 0.0;
        J(k + 1, k) = 0.0;
      }
    }
    off += b.d > 0 ? 2 * b.n : b.n;
  }
  return J;
}

inline Matrix rotation(const std::vector<JordanBlock>& blocks, double t) {
  int n = 0;
  for (const auto& b : blocks) n += b.d > 0 ? 2 * b.n : b.n;
  Matrix E = Matrix::Identity(n, n);
  int off = 0;
  for (const auto& b : blocks) {
    if (b.d > 0) {
      for (int i = 0; i < b.n; ++i) {
        const int k = off + 2 * i;
        E.block(k, k, 2, 2) << std::cos(b.d * t), std::sin(b.d * t), -std::sin(b.d * t), std::cos(b.d * t);
      }
    }
    off += b.d > 0 ? 2 * b.n : b.n;
  }
  return E;
}

inline Matrix expm(const Matrix& M) { return M.exp(); }

// Range after m successes: each block flows by exp(bar_r * span) and is
// divided by 2 to the total number of bits it received since z_0.
inline Vector range_after(const std::vector<JordanBlock>& blocks, const Vector& J0, double span,
                          const std::vector<long long>& bits_per_block) {
  const Matrix flow = expm(bar(blocks) * span);
  Vector out = flow * J0;
  int off = 0;
  for (std::size_t r = 0; r < blocks.size(); ++r) {
    const int dim = blocks[r].d > 0 ? 2 * blocks[r].n : blocks[r].n;
    out.segment(off, dim) *= std::exp2(-static_cast<double>(bits_per_block[r]));
    off += dim;
  }
  return out;
}

// Onsets h with a <= h <= b.
inline int count_onsets(const DoSTrace& tr, double a, double b) {
  int n = 0;
  for (const auto& iv : tr.intervals()) n += (iv.h >= a && iv.h <= b) ? 1 : 0;
  return n;
}

inline double jammed_time(const DoSTrace& tr, double a, double b) {
  double total = 0.0;
  for (const auto& iv : tr.intervals()) total += std::max(0.0, std::min(b, iv.end()) - std::max(a, iv.h));
  return total;
}

inline bool blocked(const DoSTrace& tr, double t) {
  for (const auto& iv : tr.intervals()) {
    if (iv.tau == 0.0 ? std::abs(t - iv.h) <= kTimeEps : (t >= iv.h - kTimeEps && t < iv.end() - kTimeEps)) {
      return true;
    }
  }
  return false;
}

inline std::vector<double> successes(const DoSTrace& tr, double delta, double horizon) {
  std::vector<double> out;
  for (long k = 0; static_cast<double>(k) * delta <= horizon + kTimeEps; ++k) {
    const double t = static_cast<double>(k) * delta;
    if (!blocked(tr, t)) out.push_back(t);
  }
  return out;
}

// Worst violation of both admissibility inequalities over windows whose
// endpoints are onsets, ends, grid points and the horizon.
inline double admissibility_slack(const DoSTrace& tr, const DoSParams& p, double grid) {
  std::vector<double> pts = {0.0, tr.horizon()};
  for (const auto& iv : tr.intervals()) {
    pts.push_back(iv.h);
    pts.push_back(iv.end());
  }
  if (grid > 0) {
    for (double x = 0.0; x <= tr.horizon(); x += grid) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  double worst = -kInfinity;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      const double a = pts[i];
      const double b = pts[j];
      const double freq = count_onsets(tr, a, b) - p.eta - (std::isinf(p.tau_D) ? 0.0 : (b - a) / p.tau_D);
      const double dur = jammed_time(tr, a, b) - p.kappa - (std::isinf(p.T) ? 0.0 : (b - a) / p.T);
      worst = std::max({worst, freq, dur});
    }
  }
  return worst;
}

}  // namespace qncs::oracle
