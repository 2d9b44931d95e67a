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

#include <iostream>

#include "CLI11.hpp"
#include "app/commands.hpp"
#include "qncs/errors.hpp"
#include "qncs/version.hpp"

namespace {

using qncs::app::CommandOptions;

void add_common(CLI::App* sub, CommandOptions& opts, bool needs_config) {
  auto* c = sub->add_option("--config", opts.config, "JSON run configuration (or a run manifest)");
  if (needs_config) c->required();
  sub->add_option("--out", opts.out, "output directory (default $QNCS_OUT_ROOT/<subcommand>-<digest>)");
  sub->add_option("--seed", opts.overrides.seed, "DoS generator seed (sweep: base seed)");
  sub->add_option("--substeps", opts.overrides.substeps, "integration substeps per transmission interval")
      ->check(CLI::PositiveNumber);
  sub->add_option("--horizon", opts.overrides.horizon, "simulation horizon in seconds")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantised control over a network under denial-of-service"};
  app.set_version_flag("--version", std::string(qncs::kVersion));
  app.require_subcommand(1);

  CommandOptions opts;
  auto* simulate = app.add_subcommand("simulate", "run the closed loop and write CSVs, summary and manifest");
  add_common(simulate, opts, true);
  auto* compare = app.add_subcommand("compare", "run both bit-rate protocols on the same trace");
  add_common(compare, opts, true);
  auto* bound = app.add_subcommand("bound", "print rate thresholds, margins and decay certificates");
  add_common(bound, opts, true);
  auto* sweep = app.add_subcommand("sweep", "map the stable region over (rate, DoS level)");
  add_common(sweep, opts, true);
  sweep->add_option("--grid", opts.grid, "grid, e.g. \"R=1:20;level=0.025:0.975:20\"");
  auto* dos_check = app.add_subcommand("dos-check", "fit DoS frequency and duration parameters to a trace");
  add_common(dos_check, opts, false);
  dos_check->add_option("--trace", opts.trace, "trace CSV (onset_s,duration_s)")->required();
  dos_check->add_option("--delta", opts.delta, "transmission interval in seconds")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qncs::app::kExitConfig;
  }

  try {
    if (*simulate) return qncs::app::cmd_simulate(opts, std::cout);
    if (*compare) return qncs::app::cmd_compare(opts, std::cout);
    if (*bound) return qncs::app::cmd_bound(opts, std::cout);
    if (*sweep) return qncs::app::cmd_sweep(opts, std::cout);
    if (*dos_check) return qncs::app::cmd_dos_check(opts, std::cout);
  } catch (const qncs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qncs::app::kExitConfig;
  } catch (const qncs::InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return qncs::app::kExitInvariant;
  } catch (const qncs::DosBudgetExceeded& e) {
    std::cerr << "DoS budget exceeded: " << e.what() << "\n";
    return qncs::app::kExitDosBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
