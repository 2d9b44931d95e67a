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

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "app/config.hpp"

namespace qncs::app {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitDosBudget = 4;

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  Overrides overrides;
  std::optional<std::string> grid;        // sweep only
  std::optional<std::filesystem::path> trace;  // dos-check only
  std::optional<double> delta;            // dos-check only
};

/// --out, else $QNCS_OUT_ROOT (default "qncs_runs") / <subcommand>-<digest prefix>.
std::filesystem::path resolve_out_dir(const CommandOptions& opts, const std::string& subcommand,
                                      const std::string& digest);

int cmd_simulate(const CommandOptions& opts, std::ostream& out);
int cmd_compare(const CommandOptions& opts, std::ostream& out);
int cmd_bound(const CommandOptions& opts, std::ostream& out);
int cmd_sweep(const CommandOptions& opts, std::ostream& out);
int cmd_dos_check(const CommandOptions& opts, std::ostream& out);

struct SweepPoint {
  int R = 0;
  double level = 0.0;
  bool analytic_stable = false;
  double empirical_fraction = 0.0;  // NaN when not simulated
};

/// Every block with c >= 0 satisfies the rate threshold at this level (and
/// level < 1). R applies to every block.
bool analytic_stable(const BlockStructure& structure, double delta, int R, double level);

/// Analytic verdict per grid point; with sweep.empirical, the fraction of
/// seeds whose time-invariant run converges on a level-targeted trace.
std::vector<SweepPoint> run_sweep(const RunConfig& rc, const SweepSpec& sweep);

/// Columns R, dos_level, analytic_stable, empirical_converged_fraction.
std::string region_csv(const std::vector<SweepPoint>& points);

}  // namespace qncs::app
