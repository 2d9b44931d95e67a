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

// Shared test scenarios: the double-integrator-like benchmark plant and
// random block structures with a stabilising gain.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qncs/dos.hpp"
#include "qncs/model.hpp"
#include "qncs/sim.hpp"

namespace qncs::testing {

// Benchmark plant: one real Jordan block (c = 1, n = 2) with S = B = I.
inline PlantSpec benchmark_plant() {
  PlantSpec p;
  p.A = Matrix{{1.0, 1.0}, {0.0, 1.0}};
  p.B = Matrix::Identity(2, 2);
  p.K = Matrix{{-2.1961, -0.7545}, {-0.7545, -2.7146}};
  return p;
}

inline BlockStructure benchmark_structure() {
  BlockStructure s;
  s.blocks = {JordanBlock{1.0, 0.0, 2}};
  s.S = Matrix::Identity(2, 2);
  return s;
}

inline constexpr double kBenchmarkDelta = 0.1;
inline constexpr double kBenchmarkHorizon = 20.0;
inline constexpr double kBenchmarkLevel = 0.8793;

// Attack trace with 20 onsets and 15.52 +- 0.5 s of jamming over 20 s.
inline DoSTrace benchmark_trace() {
  const TraceGenerator gen;
  const std::uint64_t seed = search_trace_seed(gen, kBenchmarkHorizon, TraceTarget{});
  return generate_trace(gen, kBenchmarkHorizon, seed);
}

inline SimConfig benchmark_config(DoSTrace trace, ProtocolKind kind, int R = 2) {
  SimConfig cfg;
  cfg.plant = benchmark_plant();
  cfg.structure = benchmark_structure();
  cfg.trace = std::move(trace);
  cfg.protocol.kind = kind;
  cfg.protocol.R = {R};
  cfg.delta = kBenchmarkDelta;
  cfg.horizon = kBenchmarkHorizon;
  cfg.substeps = 20;
  // A generic draw: rational starts such as (1, -1) land the quantizer input
  // exactly on cell edges, where rounding picks the codeword.
  cfg.x0 = Vector{{0.7316, -1.2043}};
  cfg.j_margin = 1.0;
  return cfg;
}

inline DoSTrace no_attack(double horizon) { return DoSTrace({}, horizon); }

struct RandomSystem {
  PlantSpec plant;
  BlockStructure structure;
};

// Mixed real/complex blocks of order 1 or 2 and a well-conditioned S.
inline BlockStructure random_structure(std::mt19937_64& rng, int max_blocks = 3, double c_min = -1.0,
                                       double c_max = 1.0) {
  std::uniform_int_distribution<int> count(1, max_blocks);
  std::uniform_int_distribution<int> order(1, 2);
  std::bernoulli_distribution complex_block(0.5);
  std::uniform_real_distribution<double> c_dist(c_min, c_max);
  std::uniform_real_distribution<double> d_dist(0.5, 3.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  BlockStructure s;
  const int nb = count(rng);
  for (int i = 0; i < nb; ++i) {
    JordanBlock b;
    b.c = c_dist(rng);
    b.n = order(rng);
    b.d = complex_block(rng) ? d_dist(rng) : 0.0;
    s.blocks.push_back(b);
  }
  const int n = s.nx();
  s.S = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s.S(i, j) += 0.3 * unit(rng);
  }
  return s;
}

// A = S^-1 J S, B = I and K chosen so that A + BK has a negative definite
// symmetric part (hence Hurwitz).
inline RandomSystem random_system(std::mt19937_64& rng, int max_blocks = 3, double c_min = -1.0,
                                  double c_max = 1.0) {
  RandomSystem rs;
  rs.structure = random_structure(rng, max_blocks, c_min, c_max);
  const int n = rs.structure.nx();
  const Matrix J = jordan_matrix(rs.structure.blocks);
  rs.plant.A = rs.structure.S.inverse() * J * rs.structure.S;
  rs.plant.B = Matrix::Identity(n, n);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix G(n, n);
  Matrix H(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      G(i, j) = unit(rng);
      H(i, j) = unit(rng);
    }
  }
  const Matrix closed = -(G * G.transpose() + Matrix::Identity(n, n)) + (H - H.transpose());
  rs.plant.K = closed - rs.plant.A;
  return rs;
}

inline Vector random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = unit(rng);
  return v;
}

}  // namespace qncs::testing
