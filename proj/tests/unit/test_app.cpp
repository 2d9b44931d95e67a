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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/manifest.hpp"
#include "app/outputs.hpp"
#include "doctest.h"
#include "qncs/errors.hpp"

using namespace qncs;
using namespace qncs::app;

namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(QNCS_SOURCE_DIR) / "configs";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qncs_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json small_config() {
  return Json::parse(R"({
    "plant": {"A": [[1, 1], [0, 1]], "B": [[1, 0], [0, 1]],
              "K": [[-2.1961, -0.7545], [-0.7545, -2.7146]]},
    "structure": {"blocks": [{"c": 1, "d": 0, "n": 2}], "S": [[1, 0], [0, 1]]},
    "network": {"delta": 0.1},
    "dos": {"kind": "intervals", "intervals": [[1.0, 0.5], [3.0, 0.25]]},
    "protocol": {"kind": "time-invariant", "rates": [2]},
    "simulation": {"horizon": 5, "substeps": 5}
  })");
}

std::string error_of(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config digest ignores key order") {
  const Json a = small_config();
  const Json b = Json::parse(R"({
    "simulation": {"substeps": 5, "horizon": 5},
    "protocol": {"rates": [2], "kind": "time-invariant"},
    "dos": {"intervals": [[1.0, 0.5], [3.0, 0.25]], "kind": "intervals"},
    "network": {"delta": 0.1},
    "structure": {"S": [[1, 0], [0, 1]], "blocks": [{"n": 2, "d": 0, "c": 1}]},
    "plant": {"K": [[-2.1961, -0.7545], [-0.7545, -2.7146]], "B": [[1, 0], [0, 1]], "A": [[1, 1], [0, 1]]}
  })");
  CHECK(config_digest(parse_config(a).resolved) == config_digest(parse_config(b).resolved));
  Json c = a;
  c["simulation"]["horizon"] = 6;
  CHECK(config_digest(parse_config(a).resolved) != config_digest(parse_config(c).resolved));
}

TEST_CASE("resolved config is a fixed point") {
  const RunConfig rc = load_config(kConfigs / "example_dos_attack.json");
  const RunConfig again = parse_config(rc.resolved);
  CHECK(again.resolved == rc.resolved);
  CHECK(again.sim.trace == rc.sim.trace);
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("diagnostics name the field") {
  Json doc = small_config();
  doc["plant"].erase("K");
  CHECK(error_of(doc).find("plant.K") != std::string::npos);
  doc = small_config();
  doc["plant"]["K"][1] = "oops";
  CHECK(error_of(doc).find("plant.K[1]") != std::string::npos);
  doc = small_config();
  doc["simulation"]["horizn"] = 3;
  CHECK(error_of(doc).find("horizn") != std::string::npos);
  doc = small_config();
  doc["network"]["delta"] = -1;
  CHECK(error_of(doc).find("network.delta") != std::string::npos);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_json_text("{\n  \"plant\": {,\n}", "cfg.json");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("cfg.json:2:", 0) == 0);
  }
}

TEST_CASE("grid specs") {
  const SweepSpec s = parse_grid_spec("R=1:4;level=0.1:0.4:4", SweepSpec{});
  CHECK(s.rates == std::vector<int>{1, 2, 3, 4});
  REQUIRE(s.levels.size() == 4);
  CHECK(s.levels[3] == doctest::Approx(0.4));
  CHECK_THROWS_AS(parse_grid_spec("R=4", SweepSpec{}), ConfigError);
  CHECK_THROWS_AS(parse_grid_spec("Q=1:2", SweepSpec{}), ConfigError);
}

TEST_CASE("simulate writes strict CSVs and a manifest that reproduces them") {
  const fs::path first = scratch("first");
  const fs::path second = scratch("second");
  std::ostringstream sink;
  CommandOptions opts;
  opts.config = kConfigs / "example_dos_attack.json";
  opts.out = first;
  CHECK(cmd_simulate(opts, sink) == kExitOk);
  const std::string summary = slurp(first / "summary.txt");
  CHECK(summary.find("verdict=converged") != std::string::npos);
  CHECK(summary.find("attempts=200") != std::string::npos);
  CHECK(summary.find("bits_attempted=800") != std::string::npos);

  for (const char* name : {"trajectory.csv", "transmissions.csv"}) {
    const std::string csv = slurp(first / name);
    CHECK(csv.find('\r') == std::string::npos);
    std::istringstream in(csv);
    std::string header, line;
    std::getline(in, header);
    const auto columns = std::count(header.begin(), header.end(), ',');
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(std::count(line.begin(), line.end(), ',') == columns);
      for (char ch : line) CHECK((std::isdigit(static_cast<unsigned char>(ch)) || std::string(",.-+einf").find(ch) != std::string::npos));
    }
    CHECK(rows > 0);
  }

  opts.config = first / "manifest.json";
  opts.out = second;
  CHECK(cmd_simulate(opts, sink) == kExitOk);
  CHECK(slurp(first / "trajectory.csv") == slurp(second / "trajectory.csv"));
  CHECK(slurp(first / "transmissions.csv") == slurp(second / "transmissions.csv"));
  const Json m1 = Json::parse(slurp(first / "manifest.json"));
  const Json m2 = Json::parse(slurp(second / "manifest.json"));
  CHECK(m1["config_digest"] == m2["config_digest"]);
}

TEST_CASE("bound refuses a saturated DoS level while simulate only warns") {
  Json doc = small_config();
  doc["dos_params"] = {{"level", 1.2}};
  const fs::path dir = scratch("saturated");
  const fs::path cfg = dir / "cfg.json";
  write_file(cfg, doc.dump());
  std::ostringstream sink;
  CommandOptions opts;
  opts.config = cfg;
  opts.out = dir / "out";
  CHECK_THROWS_AS(cmd_bound(opts, sink), DosBudgetExceeded);
  CHECK(cmd_simulate(opts, sink) == kExitOk);
  CHECK(slurp(dir / "out" / "summary.txt").find("warning") != std::string::npos);
}

TEST_CASE("bound reproduces the benchmark numbers") {
  std::ostringstream out;
  CommandOptions opts;
  opts.config = kConfigs / "example_bound.json";
  CHECK(cmd_bound(opts, out) == kExitOk);
  const std::string s = out.str();
  CHECK(s.find("block1.threshold=1.1952") != std::string::npos);
  CHECK(s.find("block1.suggested_rate=2") != std::string::npos);
  CHECK(s.find("block1.margin=0.9278") != std::string::npos);
}

TEST_CASE("bound and sweep agree") {
  RunConfig rc = load_config(kConfigs / "example_sweep.json");
  SweepSpec sw = rc.sweep;
  sw.empirical = false;
  for (const auto& p : run_sweep(rc, sw)) {
    const bool certified = p.level < 1.0 && p.R > 0.1 * std::log2(std::exp(1.0)) / (1.0 - p.level);
    CHECK(p.analytic_stable == certified);
  }
  const std::string csv = region_csv(run_sweep(rc, sw));
  CHECK(csv.rfind("R,dos_level,analytic_stable,empirical_converged_fraction\n", 0) == 0);
}

TEST_CASE("sweep refuses oversized grids") {
  RunConfig rc = load_config(kConfigs / "example_sweep.json");
  SweepSpec sw = rc.sweep;
  sw.max_points = 10;
  CHECK_THROWS_AS(run_sweep(rc, sw), ConfigError);
}

TEST_CASE("output directory falls back to the environment root") {
  CommandOptions opts;
  const fs::path p = resolve_out_dir(opts, "simulate", "0123456789abcdef");
  CHECK(p.filename() == "simulate-0123456789ab");
  opts.out = "/tmp/x";
  CHECK(resolve_out_dir(opts, "simulate", "0123456789abcdef") == fs::path("/tmp/x"));
}
