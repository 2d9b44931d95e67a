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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "app/config.hpp"

namespace qncs::app {

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

/// Digest of the canonical dump; object keys are sorted, so the digest does
/// not depend on the key order of the source file.
std::string config_digest(const Json& resolved);

struct RunManifest {
  std::string digest;
  std::uint64_t seed = 0;
  std::string version;
  std::string subcommand;
  std::vector<std::string> outputs;  // file names relative to the output directory
  Json config;                       // resolved configuration

  [[nodiscard]] Json to_json() const;
};

RunManifest make_manifest(const RunConfig& rc, const std::string& subcommand, std::vector<std::string> outputs);

}  // namespace qncs::app
