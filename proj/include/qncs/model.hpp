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

#include <vector>

#include <Eigen/Dense>

namespace qncs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Continuous-time plant x' = A x + B u with stabilising state feedback K.
struct PlantSpec {
  Matrix A;
  Matrix B;
  Matrix K;

  [[nodiscard]] int nx() const { return static_cast<int>(A.rows()); }
  [[nodiscard]] int nu() const { return static_cast<int>(B.cols()); }

  /// Throws ConfigError on inconsistent dimensions or if A + BK is not Hurwitz.
  void validate() const;
};

/// One real-Jordan block: eigenvalue c (real case, d == 0) or c +- i d
/// (complex pair, d > 0) with multiplicity n.
struct JordanBlock {
  double c = 0.0;
  double d = 0.0;
  int n = 1;

  [[nodiscard]] bool is_complex() const { return d > 0.0; }
  [[nodiscard]] int dim() const { return is_complex() ? 2 * n : n; }
};

struct ModelTolerances {
  double structural = 1e-9;  // relative Frobenius error of S A S^-1 vs. Jordan form
  double derivative = 1e-6;  // per-entry error of the E(t) identity check
  double max_condition = 1e12;
};

/// Real-Jordan decomposition supplied by the user: x~ = S x and
/// S A S^-1 = blockdiag(A_1, ..., A_p).
struct BlockStructure {
  std::vector<JordanBlock> blocks;
  Matrix S;

  [[nodiscard]] int nx() const;
  /// First state index of each block, plus a trailing entry equal to nx().
  [[nodiscard]] std::vector<int> offsets() const;
  /// Index of the owning block for every state element.
  [[nodiscard]] std::vector<int> element_blocks() const;

  /// Checks block invariants, cond(S) and S A S^-1 == jordan_matrix().
  void validate(const Matrix& A, const ModelTolerances& tol = {}) const;

  /// Convenience constructor for A with pairwise distinct eigenvalues.
  /// Throws ConfigError when eigenvalues coincide (a Jordan chain would be
  /// needed and must be supplied explicitly).
  static BlockStructure from_distinct_eigenvalues(const Matrix& A, double separation = 1e-8);
};

/// Real Jordan matrix A~ assembled from blocks (rotation parts included).
Matrix jordan_matrix(const std::vector<JordanBlock>& blocks);

/// Time-invariant Abar: each block is c on the diagonal with 1 (real) or
/// I_2 (complex) on the superdiagonal.
Matrix bar_matrix(const std::vector<JordanBlock>& blocks);

/// Block-diagonal rotation E(t); identity on real blocks.
Matrix eval_E(const BlockStructure& structure, double t);

/// exp(Abar_r t) for one block: e^{ct} V(t) (x) W with V upper-triangular
/// Toeplitz in t^k/k!.
Matrix eval_Ur(const JordanBlock& block, double t);

/// exp(Abar t) assembled blockwise.
Matrix eval_expAbar(const std::vector<JordanBlock>& blocks, double t);

/// Plant together with its bar-coordinate representation
/// xbar(t) = E(t) S x(t).
class TransformedSystem {
 public:
  TransformedSystem(PlantSpec plant, BlockStructure structure, ModelTolerances tol = {});

  [[nodiscard]] const PlantSpec& plant() const { return plant_; }
  [[nodiscard]] const BlockStructure& structure() const { return structure_; }
  [[nodiscard]] const Matrix& Abar() const { return abar_; }
  [[nodiscard]] const Matrix& S() const { return structure_.S; }
  [[nodiscard]] const Matrix& S_inv() const { return s_inv_; }
  [[nodiscard]] int nx() const { return plant_.nx(); }
  [[nodiscard]] bool time_invariant() const { return time_invariant_; }

  [[nodiscard]] Matrix Bbar(double t) const;  // E(t) S B
  [[nodiscard]] Matrix Kbar(double t) const;  // K S^-1 E(t)^-1

  [[nodiscard]] Vector to_bar(double t, const Vector& x) const;
  [[nodiscard]] Vector from_bar(double t, const Vector& xbar) const;

 private:
  PlantSpec plant_;
  BlockStructure structure_;
  Matrix abar_;
  Matrix s_inv_;
  bool time_invariant_ = true;
};

/// Builds the transformed system and checks Abar = E A~ E^-1 + E' E^-1 at a
/// handful of sample times with a central-difference E'.
TransformedSystem build_transformed_system(const PlantSpec& plant, const BlockStructure& structure,
                                           const ModelTolerances& tol = {});

/// Largest per-entry deviation of E(t) A~ E(t)^T + (central difference E') E(t)^T
/// from Abar, with step h.
double transform_identity_residual(const BlockStructure& structure, double t, double h = 1e-6);

}  // namespace qncs
