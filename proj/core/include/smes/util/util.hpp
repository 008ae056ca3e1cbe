// Copyright 2026 The smes-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace smes::util {

// Sorted keys, two-space indent, raw UTF-8, trailing newline.
std::string canonical_dump(const nlohmann::json& doc);

// Round half away from zero at `decimals` places.
double round_to(double value, int decimals);

// Shortest decimal text that round-trips, always with a fractional part
// ("3.0", "0.25").
std::string format_seconds(double value);

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

std::string trim(std::string_view text);

}  // namespace smes::util
