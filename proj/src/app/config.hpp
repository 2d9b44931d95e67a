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

// JSON run configuration. Errors name the offending field as a dotted path
// (e.g. "plant.K[1]") and JSON syntax errors carry line and column.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qncs/dos.hpp"
#include "qncs/sim.hpp"

namespace qncs::app {

using Json = nlohmann::json;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> substeps;
  std::optional<double> horizon;
};

struct SweepSpec {
  std::vector<int> rates;
  std::vector<double> levels;
  int seeds = 20;
  bool empirical = true;
  double horizon = 20.0;
  int substeps = 10;
  double period_min = 1.0;  // DoS period range of the level-targeted generator
  double period_max = 1.5;
  int max_points = 2500;
  int parallelism = 0;  // 0 selects the hardware concurrency

  [[nodiscard]] std::size_t points() const { return rates.size() * levels.size(); }
};

struct RunConfig {
  SimConfig sim;
  std::optional<DoSParams> dos_params;
  std::uint64_t seed = 0;  // seed of the generated trace, base seed of sweeps
  int guard = 0;
  SweepSpec sweep;
  Json resolved;  // canonical form; parse_config(resolved) yields the same run
};

/// Parses JSON text; syntax errors become ConfigError "origin:line:col: ...".
Json parse_json_text(const std::string& text, const std::string& origin);

/// Accepts a config document or a run manifest (its "config" member).
/// Relative trace paths resolve against base_dir.
RunConfig parse_config(const Json& doc, const Overrides& ov = {}, const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path, const Overrides& ov = {});

/// "R=1:20;level=0.025:0.975:20" (inclusive integer range; n evenly spaced
/// levels). Either part may be omitted. Throws ConfigError.
SweepSpec parse_grid_spec(const std::string& spec, SweepSpec base);

/// "inf" strings for non-finite values (JSON has no infinity literal).
Json number_to_json(double v);

}  // namespace qncs::app
