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

#include <stdexcept>
#include <string>

namespace qncs {

/// Malformed or inconsistent input (config files, matrices, traces).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed-loop invariant was violated at run time (quantizer overflow,
/// encoder/decoder desynchronisation). Always fatal.
class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The DoS level 1/T + delta/tau_D leaves no room for any bit rate.
class DosBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qncs
