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

// Locale-independent number formatting for the CSV and key=value outputs.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qncs::text {

/// Shortest round-trip representation; "inf" / "-inf" / "nan" for non-finite.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

}  // namespace qncs::text
