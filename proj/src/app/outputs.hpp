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

// CSV and key=value emitters. Numbers use '.' and shortest round-trip
// form; lines end in LF.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "app/config.hpp"
#include "qncs/sim.hpp"

namespace qncs::app {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// t, x_1..x_n, xhat_1..xhat_n, e_1..e_n, j_1..j_n, dos_active, attempt, success, bits_this_attempt
std::string trajectory_csv(const SimResult& res, int nx);

/// One row per attempt: t, success, total_bits, budget per block, codeword
/// index and bits per element, and for the time-varying protocol the clock
/// index g and roll flag per block.
std::string transmissions_csv(const SimResult& res, const BlockStructure& structure, bool time_varying);

/// Verdict, decay fit, bit totals and DoS statistics of one run.
KeyValues sim_summary(const RunConfig& rc, const SimResult& res);

std::string render(const KeyValues& kv);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace qncs::app
