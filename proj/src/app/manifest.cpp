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

#include "app/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

#include "qncs/version.hpp"

namespace qncs::app {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

std::string config_digest(const Json& resolved) { return sha256_hex(resolved.dump()); }

Json RunManifest::to_json() const {
  return {{"manifest", {{"tool", "qncs"}, {"version", version}, {"subcommand", subcommand}}},
          {"config_digest", "sha256:" + digest},
          {"seed", seed},
          {"outputs", outputs},
          {"config", config}};
}

RunManifest make_manifest(const RunConfig& rc, const std::string& subcommand, std::vector<std::string> outputs) {
  return {config_digest(rc.resolved), rc.seed, kVersion, subcommand, std::move(outputs), rc.resolved};
}

}  // namespace qncs::app
