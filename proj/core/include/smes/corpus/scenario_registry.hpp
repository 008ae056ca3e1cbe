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

#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace smes::corpus {

// The set of admissible scenario tags. Seeded with fifteen defaults; a
// deployment can load its own list (one tag per line, '#' comments).
class ScenarioRegistry {
 public:
  ScenarioRegistry();
  explicit ScenarioRegistry(std::vector<std::string> tags);

  static ScenarioRegistry from_stream(std::istream& in);
  static ScenarioRegistry from_file(const std::string& path);

  bool contains(std::string_view tag) const;
  const std::vector<std::string>& tags() const { return tags_; }

 private:
  std::vector<std::string> tags_;
  std::set<std::string, std::less<>> index_;
};

const std::vector<std::string>& default_scenarios();

}  // namespace smes::corpus
