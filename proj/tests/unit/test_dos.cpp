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
#include "qncs/dos.hpp"
#include "qncs/errors.hpp"

using namespace qncs;

TEST_CASE("onset counting includes both window ends") {
  const DoSTrace empty({}, 10.0);
  CHECK(empty.count_transitions(0.0, 10.0) == 0);
  const DoSTrace pulse({{5.0, 0.5}}, 10.0);
  CHECK(pulse.count_transitions(0.0, 4.0) == 0);
  CHECK(pulse.count_transitions(0.0, 5.0) == 1);
  CHECK(pulse.count_transitions(5.0, 10.0) == 1);
  CHECK_THROWS((void)pulse.count_transitions(0.0, 11.0));
}

TEST_CASE("jammed duration") {
  CHECK(DoSTrace({}, 10.0).dos_duration(0.0, 10.0) == 0.0);
  const DoSTrace one({{2.0, 3.0}}, 10.0);
  CHECK(one.dos_duration(0.0, 10.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(one.dos_duration(3.0, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.dos_duration(6.0, 9.0) == 0.0);
}

TEST_CASE("window statistics agree with brute force on generated traces") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.0, 20.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DoSTrace tr = generate_trace(TraceGenerator{}, 20.0, seed);
    for (int i = 0; i < 50; ++i) {
      double a = pos(rng);
      double b = pos(rng);
      if (a > b) std::swap(a, b);
      CHECK(tr.count_transitions(a, b) == oracle::count_onsets(tr, a, b));
      CHECK(tr.dos_duration(a, b) == doctest::Approx(oracle::jammed_time(tr, a, b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("benchmark trace has 20 onsets and about 15.52 s of jamming") {
  const DoSTrace tr = testing::benchmark_trace();
  CHECK(oracle::count_onsets(tr, 0.0, 20.0) == 20);
  CHECK(tr.count_transitions(0.0, 20.0) == 20);
  CHECK(std::abs(oracle::jammed_time(tr, 0.0, 20.0) - 15.52) <= 0.5);
}

TEST_CASE("trace construction rejects overlap, disorder and overhang") {
  CHECK_THROWS_AS(DoSTrace({{1.0, 1.0}, {1.5, 1.0}}, 10.0), ConfigError);
  CHECK_THROWS_AS(DoSTrace({{3.0, 1.0}, {1.0, 1.0}}, 10.0), ConfigError);
  CHECK_THROWS_AS(DoSTrace({{9.0, 2.0}}, 10.0), ConfigError);
  CHECK_THROWS_AS(DoSTrace({{1.0, 1.0}, {2.0, 1.0}}, 10.0), ConfigError);
}

TEST_CASE("admissibility examples") {
  const DoSParams loose{1.0, 10.0, 0.1, 2.0};
  CHECK(check_admissible(DoSTrace({}, 10.0), loose, 0.1).ok);
  CHECK(check_admissible(DoSTrace({{0.0, 0.05}}, 10.0), loose, 0.1).ok);
  const DoSTrace twins({{0.0, 0.0}, {0.01, 0.0}}, 1.0);
  const auto res = check_admissible(twins, DoSParams{0.0, 1.0, 0.0, kInfinity}, 0.1);
  CHECK_FALSE(res.ok);
  CHECK(res.which == "frequency");
  CHECK(res.tau == 0.0);
  CHECK(res.t == doctest::Approx(0.01));
}

TEST_CASE("fitted parameters are admissible and tight") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DoSTrace tr = generate_trace(TraceGenerator{0.5, 1.5, 0.2, 0.5, 0.0}, 10.0, seed);
    const DoSParams p = fit_params(tr, 2.0, 1.0);
    CHECK(oracle::admissibility_slack(tr, p, 0.05) <= 1e-9);
    CHECK(check_admissible(tr, p, 0.05).ok);
    if (!std::isinf(p.T)) CHECK_FALSE(check_admissible(tr, DoSParams{p.eta, p.tau_D, p.kappa, p.T * 1.01}, 0.05).ok);
    if (!std::isinf(p.tau_D)) {
      CHECK_FALSE(check_admissible(tr, DoSParams{p.eta, p.tau_D * 1.01, p.kappa, p.T}, 0.05).ok);
    }
  }
}

TEST_CASE("fit of an empty trace and of a single long pulse") {
  const DoSParams empty = fit_params(DoSTrace({}, 10.0), 1.0, 0.0);
  CHECK(std::isinf(empty.tau_D));
  CHECK(std::isinf(empty.T));
  const DoSTrace pulse({{0.0, 5.0}}, 10.0);
  const DoSParams p = fit_params(pulse, 1.0, 5.0);
  CHECK(oracle::admissibility_slack(pulse, p, 0.1) <= 1e-9);
  CHECK(check_admissible(pulse, p, 0.1).ok);
}

TEST_CASE("whole-horizon averages") {
  const DoSParams e = average_params(DoSTrace({}, 20.0));
  CHECK(std::isinf(e.tau_D));
  CHECK(std::isinf(e.T));
  const DoSTrace tr = testing::benchmark_trace();
  const DoSParams avg = average_params(tr);
  CHECK(avg.tau_D == doctest::Approx(20.0 / oracle::count_onsets(tr, 0, 20)).epsilon(1e-15));
  CHECK(avg.T == doctest::Approx(20.0 / oracle::jammed_time(tr, 0, 20)).epsilon(1e-12));
}

TEST_CASE("inter-success bound") {
  CHECK(bound_Q(DoSParams{0.0, 1.0, 0.0, 2.0}, 0.1) == 0.0);
  const DoSParams p{1.0, 1.0, 1.0, 2.0};
  CHECK(bound_Q(p, 0.1) == doctest::Approx(2.75).epsilon(1e-12));
  CHECK(bound_Q(p, 0.1) == doctest::Approx(oracle::Q(p, 0.1)).epsilon(1e-15));
  CHECK(bound_Q(DoSParams{0.0, 1.0, 1.0, 2.0}, 1e-9) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(bound_Q(DoSParams{0.0, 0.1, 0.0, kInfinity}, 0.1), DosBudgetExceeded);
}

TEST_CASE("success-count lower bound") {
  const DoSParams zero{0.0, 1.0, 0.0, 2.0};
  CHECK(min_successes(zero, 0.1, 3.0, 3.0) == 0.0);
  CHECK(min_successes(zero, 0.1, 0.0, 10.0) == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(min_successes(DoSParams{}, 0.1, 0.0, 7.0) == doctest::Approx(70.0).epsilon(1e-12));
}

TEST_CASE("successful instants") {
  const auto all = successful_instants(DoSTrace({}, 0.3), 0.1);
  REQUIRE(all.size() == 4);
  CHECK(all[3] == doctest::Approx(0.3));
  const auto gap = successful_instants(DoSTrace({{0.05, 0.2}}, 0.3), 0.1);
  REQUIRE(gap.size() == 2);
  CHECK(gap[0] == 0.0);
  CHECK(gap[1] == doctest::Approx(0.3));
  const auto spike = successful_instants(DoSTrace({{0.1, 0.0}}, 0.3), 0.1);
  REQUIRE(spike.size() == 3);
  CHECK(spike[1] == doctest::Approx(0.2));
  CHECK(attempt_count(20.0, 0.1) == 201);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DoSTrace tr = generate_trace(TraceGenerator{}, 20.0, seed);
    CHECK(successful_instants(tr, 0.1) == oracle::successes(tr, 0.1, 20.0));
  }
}

TEST_CASE("generator edge cases and determinism") {
  CHECK(generate_trace(TraceGenerator{0.5, 1.5, 0.0, 0.0, 0.0}, 20.0, 1).empty());
  const DoSTrace full = generate_trace(TraceGenerator{30.0, 30.0, 1.0, 1.0, 0.0}, 20.0, 1);
  REQUIRE(full.intervals().size() == 1);
  CHECK(full.intervals()[0].tau == doctest::Approx(20.0));
  const DoSTrace a = generate_trace(TraceGenerator{}, 20.0, 42);
  const DoSTrace b = generate_trace(TraceGenerator{}, 20.0, 42);
  CHECK(trace_to_csv(a) == trace_to_csv(b));
  CHECK(a != generate_trace(TraceGenerator{}, 20.0, 43));
  CHECK_THROWS_AS(generate_trace(TraceGenerator{1.0, 0.5, 0.1, 0.2, 0.0}, 20.0, 0), ConfigError);
}

TEST_CASE("level-targeted traces hit their long-run level") {
  for (double level : {0.1, 0.5, 0.9}) {
    const DoSTrace tr = generate_level_trace(LevelTraceGenerator{}, level, 0.1, 200.0, 4);
    const double frac = (oracle::jammed_time(tr, 0, 200) + 0.1 * oracle::count_onsets(tr, 0, 200)) / 200.0;
    CHECK(frac == doctest::Approx(level).epsilon(0.05));
  }
  CHECK(generate_level_trace(LevelTraceGenerator{}, 0.0, 0.1, 20.0, 1).empty());
}

TEST_CASE("trace CSV round trip and strict parsing") {
  const DoSTrace tr = generate_trace(TraceGenerator{}, 20.0, 7);
  CHECK(trace_from_csv(trace_to_csv(tr)) == tr);
  CHECK_THROWS_AS(trace_from_csv("onset_s,duration_s\n1;0.5\n", 10.0), ConfigError);
  CHECK_THROWS_AS(trace_from_csv("onset,dur\n1,0.5\n", 10.0), ConfigError);
  CHECK_THROWS_AS(trace_from_csv("onset_s,duration_s\n1,0,5\n", 10.0), ConfigError);
  const DoSTrace parsed = trace_from_csv("onset_s,duration_s\n1,0.5\n", 10.0);
  CHECK(parsed.intervals().size() == 1);
}
