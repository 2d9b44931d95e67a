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

#include "qncs/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qncs/errors.hpp"

namespace qncs {

namespace {

std::string dims(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace

void PlantSpec::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols()) {
    throw ConfigError("plant.A must be a non-empty square matrix, got " + dims(A));
  }
  if (B.rows() != A.rows() || B.cols() == 0) {
    throw ConfigError("plant.B must have " + std::to_string(A.rows()) + " rows, got " + dims(B));
  }
  if (K.rows() != B.cols() || K.cols() != A.rows()) {
    throw ConfigError("plant.K must be " + std::to_string(B.cols()) + "x" + std::to_string(A.rows()) +
                      ", got " + dims(K));
  }
  if (!A.allFinite() || !B.allFinite() || !K.allFinite()) {
    throw ConfigError("plant matrices contain non-finite entries");
  }
  const Matrix closed = A + B * K;
  Eigen::EigenSolver<Matrix> es(closed, false);
  const double max_re = es.eigenvalues().real().maxCoeff();
  if (!(max_re < 0.0)) {
    std::ostringstream os;
    os << "A + BK is not Hurwitz (largest real part " << max_re << ")";
    throw ConfigError(os.str());
  }
}

int BlockStructure::nx() const {
  int n = 0;
  for (const auto& b : blocks) n += b.dim();
  return n;
}

std::vector<int> BlockStructure::offsets() const {
  std::vector<int> out;
  out.reserve(blocks.size() + 1);
  int acc = 0;
  for (const auto& b : blocks) {
    out.push_back(acc);
    acc += b.dim();
  }
  out.push_back(acc);
  return out;
}

std::vector<int> BlockStructure::element_blocks() const {
  std::vector<int> owner;
  owner.reserve(static_cast<std::size_t>(nx()));
  for (std::size_t r = 0; r < blocks.size(); ++r) {
    owner.insert(owner.end(), static_cast<std::size_t>(blocks[r].dim()), static_cast<int>(r));
  }
  return owner;
}

void BlockStructure::validate(const Matrix& A, const ModelTolerances& tol) const {
  if (blocks.empty()) throw ConfigError("structure.blocks must not be empty");
  for (std::size_t r = 0; r < blocks.size(); ++r) {
    const auto& b = blocks[r];
    if (b.n < 1 || b.d < 0.0 || !std::isfinite(b.c) || !std::isfinite(b.d)) {
      throw ConfigError("structure.blocks[" + std::to_string(r) + "] needs n >= 1, d >= 0 and finite c, d");
    }
  }
  if (nx() != A.rows()) {
    throw ConfigError("structure block dimensions sum to " + std::to_string(nx()) + ", plant has " +
                      std::to_string(A.rows()) + " states");
  }
  if (S.rows() != A.rows() || S.cols() != A.cols()) {
    throw ConfigError("structure.S must be " + dims(A) + ", got " + dims(S));
  }
  const double cond = condition_number(S);
  if (!(cond <= tol.max_condition)) {
    std::ostringstream os;
    os << "structure.S is singular or ill-conditioned (cond = " << cond << ")";
    throw ConfigError(os.str());
  }
  const Matrix target = jordan_matrix(blocks);
  const Matrix got = S * A * S.inverse();
  const double err = (got - target).norm() / std::max(1.0, target.norm());
  if (!(err <= tol.structural)) {
    std::ostringstream os;
    os << "S A S^-1 does not match the declared Jordan blocks (relative error " << err << ")";
    throw ConfigError(os.str());
  }
}

BlockStructure BlockStructure::from_distinct_eigenvalues(const Matrix& A, double separation) {
  Eigen::EigenSolver<Matrix> es(A, true);
  if (es.info() != Eigen::Success) throw ConfigError("eigendecomposition of plant.A failed");
  const auto& values = es.eigenvalues();
  const auto& vectors = es.eigenvectors();
  const auto n = values.size();

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double scale = std::max({1.0, std::abs(values(i)), std::abs(values(j))});
      if (std::abs(values(i) - values(j)) <= separation * scale) {
        throw ConfigError("plant.A has repeated eigenvalues; supply structure.blocks and structure.S explicitly");
      }
    }
  }

  struct Pick {
    double c;
    double d;
    Eigen::Index idx;
  };
  std::vector<Pick> picks;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = values(i).real();
    const double im = values(i).imag();
    const double scale = std::max(1.0, std::abs(values(i)));
    if (std::abs(im) <= separation * scale) {
      picks.push_back({re, 0.0, i});
    } else if (im > 0.0) {
      picks.push_back({re, im, i});
    }
  }
  std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) {
    return a.c != b.c ? a.c > b.c : a.d < b.d;
  });

  BlockStructure out;
  Matrix V(n, n);
  Eigen::Index col = 0;
  for (const auto& p : picks) {
    if (p.d == 0.0) {
      V.col(col++) = vectors.col(p.idx).real();
      out.blocks.push_back({p.c, 0.0, 1});
    } else {
      // A [Im v, Re v] = [Im v, Re v] [[c, -d], [d, c]].
      V.col(col++) = vectors.col(p.idx).imag();
      V.col(col++) = vectors.col(p.idx).real();
      out.blocks.push_back({p.c, p.d, 1});
    }
  }
  out.S = V.inverse();
  out.validate(A);
  return out;
}

Matrix jordan_matrix(const std::vector<JordanBlock>& blocks) {
  int total = 0;
  for (const auto& b : blocks) total += b.dim();
  Matrix out = Matrix::Zero(total, total);
  int off = 0;
  for (const auto& b : blocks) {
    if (!b.is_complex()) {
      for (int i = 0; i < b.n; ++i) {
        out(off + i, off + i) = b.c;
        if (i + 1 < b.n) out(off + i, off + i + 1) = 1.0;
      }
    } else {
      for (int i = 0; i < b.n; ++i) {
        const int k = off + 2 * i;
        out(k, k) = b.c;
        out(k, k + 1) = -b.d;
        out(k + 1, k) = b.d;
        out(k + 1, k + 1) = b.c;
        if (i + 1 < b.n) {
          out(k, k + 2) = 1.0;
          out(k + 1, k + 3) = 1.0;
        }
      }
    }
    off += b.dim();
  }
  return out;
}

Matrix bar_matrix(const std::vector<JordanBlock>& blocks) {
  int total = 0;
  for (const auto& b : blocks) total += b.dim();
  Matrix out = Matrix::Zero(total, total);
  int off = 0;
  for (const auto& b : blocks) {
    const int w = b.is_complex() ? 2 : 1;
    for (int i = 0; i < b.dim(); ++i) {
      out(off + i, off + i) = b.c;
      if (i + w < b.dim()) out(off + i, off + i + w) = 1.0;
    }
    off += b.dim();
  }
  return out;
}

Matrix eval_E(const BlockStructure& structure, double t) {
  const int n = structure.nx();
  Matrix E = Matrix::Identity(n, n);
  int off = 0;
  for (const auto& b : structure.blocks) {
    if (b.is_complex()) {
      const double cs = std::cos(b.d * t);
      const double sn = std::sin(b.d * t);
      for (int i = 0; i < b.n; ++i) {
        const int k = off + 2 * i;
        E(k, k) = cs;
        E(k, k + 1) = sn;
        E(k + 1, k) = -sn;
        E(k + 1, k + 1) = cs;
      }
    }
    off += b.dim();
  }
  return E;
}

Matrix eval_Ur(const JordanBlock& block, double t) {
  const int n = block.n;
  Matrix V = Matrix::Zero(n, n);
  // t^k / k! along the k-th superdiagonal.
  double term = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) term *= t / k;
    for (int i = 0; i + k < n; ++i) V(i, i + k) = term;
  }
  V *= std::exp(block.c * t);
  if (!block.is_complex()) return V;
  Matrix U = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      U(2 * i, 2 * j) = V(i, j);
      U(2 * i + 1, 2 * j + 1) = V(i, j);
    }
  }
  return U;
}

Matrix eval_expAbar(const std::vector<JordanBlock>& blocks, double t) {
  int total = 0;
  for (const auto& b : blocks) total += b.dim();
  Matrix out = Matrix::Zero(total, total);
  int off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.dim(), b.dim()) = eval_Ur(b, t);
    off += b.dim();
  }
  return out;
}

TransformedSystem::TransformedSystem(PlantSpec plant, BlockStructure structure, ModelTolerances tol)
    : plant_(std::move(plant)), structure_(std::move(structure)) {
  plant_.validate();
  structure_.validate(plant_.A, tol);
  abar_ = bar_matrix(structure_.blocks);
  s_inv_ = structure_.S.inverse();
  time_invariant_ = std::none_of(structure_.blocks.begin(), structure_.blocks.end(),
                                 [](const JordanBlock& b) { return b.is_complex(); });
}

Matrix TransformedSystem::Bbar(double t) const {
  if (time_invariant_) return structure_.S * plant_.B;
  return eval_E(structure_, t) * structure_.S * plant_.B;
}

Matrix TransformedSystem::Kbar(double t) const {
  if (time_invariant_) return plant_.K * s_inv_;
  return plant_.K * s_inv_ * eval_E(structure_, t).transpose();
}

Vector TransformedSystem::to_bar(double t, const Vector& x) const {
  if (time_invariant_) return structure_.S * x;
  return eval_E(structure_, t) * (structure_.S * x);
}

Vector TransformedSystem::from_bar(double t, const Vector& xbar) const {
  if (time_invariant_) return s_inv_ * xbar;
  return s_inv_ * (eval_E(structure_, t).transpose() * xbar);
}

double transform_identity_residual(const BlockStructure& structure, double t, double h) {
  const Matrix At = jordan_matrix(structure.blocks);
  const Matrix E = eval_E(structure, t);
  const Matrix Einv = E.inverse();
  const Matrix Edot = (eval_E(structure, t + h) - eval_E(structure, t - h)) / (2.0 * h);
  const Matrix lhs = E * At * Einv + Edot * Einv;
  return (lhs - bar_matrix(structure.blocks)).cwiseAbs().maxCoeff();
}

TransformedSystem build_transformed_system(const PlantSpec& plant, const BlockStructure& structure,
                                           const ModelTolerances& tol) {
  TransformedSystem sys(plant, structure, tol);
  constexpr double kSampleTimes[] = {0.0, 0.37, 1.0, 2.5, 7.3};
  for (double t : kSampleTimes) {
    const double res = transform_identity_residual(sys.structure(), t);
    if (!(res <= tol.derivative)) {
      std::ostringstream os;
      os << "E(t) transform identity fails at t = " << t << " (max entry error " << res << ")";
      throw ConfigError(os.str());
    }
  }
  return sys;
}

}  // namespace qncs
