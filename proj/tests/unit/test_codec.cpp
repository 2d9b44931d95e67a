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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qncs/codec.hpp"
#include "qncs/errors.hpp"

using namespace qncs;

namespace {

Codec scalar_codec(double c) {
  PlantSpec p;
  p.A = Matrix{{c}};
  p.B = Matrix{{1.0}};
  p.K = Matrix{{-c - 1.0}};
  BlockStructure s;
  s.blocks = {{c, 0.0, 1}};
  s.S = Matrix{{1.0}};
  return Codec(build_transformed_system(p, s), 0.005);
}

Codec benchmark_codec() {
  return Codec(build_transformed_system(testing::benchmark_plant(), testing::benchmark_structure()), 0.005);
}

}  // namespace

TEST_CASE("initial range must strictly dominate the state") {
  const Codec codec = benchmark_codec();
  const CodecState s = codec.init({2}, Vector::Zero(2), Vector::Ones(2));
  CHECK(s.xhat.norm() == 0.0);
  CHECK(s.bits == std::vector<int>{2, 2});
  CHECK_THROWS_AS((void)codec.init({2}, Vector{{3.0, -2.0}}, Vector{{3.0, 2.0}}), ConfigError);
  const Vector x0{{0.4, -1.7}};
  CHECK_NOTHROW((void)codec.init({2}, x0, x0.cwiseAbs().array() + 1.0));
}

TEST_CASE("propagation of the range") {
  const Codec scalar = scalar_codec(1.0);
  CodecState s = scalar.init({1}, Vector{{0.0}}, Vector{{1.0}});
  CHECK(scalar.propagate(s, 0.0) == s);
  CHECK(scalar.propagate(s, 0.1).J(0) == doctest::Approx(std::exp(0.1)).epsilon(1e-15));

  const Codec codec = benchmark_codec();
  const Vector J0{{0.7, 1.3}};
  const CodecState b = codec.init({2}, Vector::Zero(2), J0);
  for (double dt : {0.05, 0.1, 1.0}) {
    const Vector expected = std::exp(dt) * Matrix{{1.0, dt}, {0.0, 1.0}} * J0;
    CHECK((codec.propagate(b, dt).J - expected).cwiseAbs().maxCoeff() <= 1e-12 * expected.norm());
  }
}

TEST_CASE("predictor flow matches the closed-loop exponential") {
  const Codec codec = benchmark_codec();
  CodecState s = codec.init({2}, Vector::Zero(2), Vector::Ones(2));
  s.xhat = Vector{{0.5, -0.25}};
  const auto& plant = testing::benchmark_plant();
  const Matrix closed = plant.A + plant.B * plant.K;
  const Vector expected = oracle::expm(closed * 0.1) * s.xhat;
  CHECK((codec.propagate(s, 0.1).xhat - expected).norm() <= 1e-10);
}

TEST_CASE("jump examples") {
  const Codec codec = scalar_codec(1.0);
  CodecState s = codec.init({2}, Vector{{0.0}}, Vector{{1.0}});
  const EncodeResult r = codec.on_successful_tx(s, Vector{{-0.3}});
  CHECK(r.codewords[0].index == 2);
  CHECK(r.phi(0) == 0.25);
  CHECK(r.state.J(0) == 0.25);
  CHECK(r.state.xhat(0) - (-0.3) == doctest::Approx(0.05).epsilon(1e-12));

  s = codec.init({1}, Vector{{0.0}}, Vector{{1.0}});
  const EncodeResult z = codec.encode_error(s, Vector{{0.0}});
  CHECK(z.phi(0) == 0.5);
  CHECK(z.state.xhat(0) == -0.5);
  CHECK(z.state.J(0) == 0.5);
  CHECK(std::abs(z.state.xhat(0)) <= z.state.J(0));

  s = codec.init({0}, Vector{{0.2}}, Vector{{1.0}});
  s.xhat(0) = 0.6;
  const EncodeResult none = codec.on_successful_tx(s, Vector{{0.2}});
  CHECK(none.state.xhat(0) == 0.6);
  CHECK(none.state.J(0) == 1.0);
}

TEST_CASE("decoder mirrors the encoder bit for bit") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rs = testing::random_system(rng);
    const Codec codec(build_transformed_system(rs.plant, rs.structure), 0.01);
    const int nx = rs.structure.nx();
    const Vector x0 = testing::random_vector(rng, nx);
    std::vector<int> bits(rs.structure.blocks.size(), 3);
    CodecState enc = codec.init(bits, x0, x0.cwiseAbs().array() + 1.0);
    CodecState dec = enc;
    for (int k = 0; k < 10; ++k) {
      const Vector e = (enc.J.array() * testing::random_vector(rng, nx).array()).matrix();
      const EncodeResult r = codec.encode_error(enc, e);
      dec = codec.on_codewords(dec, r.codewords);
      CHECK(dec == r.state);
      CHECK(((e - r.phi).array().abs() <= r.state.J.array()).all());
      enc = codec.propagate(r.state, 0.1);
      dec = codec.propagate(dec, 0.1);
      CHECK(enc == dec);
    }
  }
}

TEST_CASE("mismatched codewords are rejected") {
  const Codec codec = benchmark_codec();
  const CodecState s = codec.init({2}, Vector::Zero(2), Vector::Ones(2));
  const std::vector<Codeword> short_list = {Codeword{1, 2}};
  CHECK_THROWS_AS((void)codec.on_codewords(s, short_list), InvariantBreach);
  const std::vector<Codeword> wrong_bits = {Codeword{1, 3}, Codeword{1, 3}};
  CHECK_THROWS_AS((void)codec.on_codewords(s, wrong_bits), InvariantBreach);
  CHECK_THROWS_AS((void)codec.encode_error(s, Vector{{1.5, 0.0}}), InvariantBreach);
}

TEST_CASE("control input") {
  const Codec codec = benchmark_codec();
  CHECK(codec.control_input(Vector::Zero(2), 1.0).norm() == 0.0);
  const Vector xhat{{0.3, -0.8}};
  CHECK((codec.control_input(xhat, 2.0) - testing::benchmark_plant().K * xhat).norm() <= 1e-15);

  PlantSpec p;
  p.A = Matrix{{0.0, -2.0}, {2.0, 0.0}};
  p.B = Matrix::Identity(2, 2);
  p.K = -2.0 * Matrix::Identity(2, 2);
  BlockStructure s;
  s.blocks = {{0.0, 2.0, 1}};
  s.S = Matrix::Identity(2, 2);
  const Codec rot(build_transformed_system(p, s), 0.01);
  const Vector x{{0.4, 1.1}};
  const auto& sys = rot.system();
  for (double t : {0.0, 0.3, 1.7}) {
    CHECK((rot.control_input(sys.to_bar(t, x), t) - p.K * x).norm() <= 1e-12);
  }
}
