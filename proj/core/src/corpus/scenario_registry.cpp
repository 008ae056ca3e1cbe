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

#include "smes/corpus/scenario_registry.hpp"

#include <fstream>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::corpus {

const std::vector<std::string>& default_scenarios() {
  static const std::vector<std::string> kDefaults = {
      "ptsd",
      "dream_analysis",
      "childhood_shadow",
      "family_relationships",
      "therapeutic_relationship",
      "romantic_relationships",
      "work_stress",
      "grief_and_loss",
      "self_esteem",
      "anxiety",
      "depressive_mood",
      "substance_use",
      "illness_and_health",
      "identity",
      "social_isolation",
  };
  return kDefaults;
}

ScenarioRegistry::ScenarioRegistry() : ScenarioRegistry(default_scenarios()) {}

ScenarioRegistry::ScenarioRegistry(std::vector<std::string> tags) : tags_(std::move(tags)) {
  for (const auto& t : tags_) {
    if (t.empty()) throw Error("invalid_scenario_registry", "empty scenario tag");
    if (!index_.insert(t).second) {
      throw Error("invalid_scenario_registry", "duplicate scenario tag: " + t);
    }
  }
}

ScenarioRegistry ScenarioRegistry::from_stream(std::istream& in) {
  std::vector<std::string> tags;
  std::string line;
  while (std::getline(in, line)) {
    auto tag = util::trim(line);
    if (tag.empty() || tag.front() == '#') continue;
    tags.push_back(std::move(tag));
  }
  return ScenarioRegistry(std::move(tags));
}

ScenarioRegistry ScenarioRegistry::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open scenario registry: " + path);
  return from_stream(in);
}

bool ScenarioRegistry::contains(std::string_view tag) const { return index_.find(tag) != index_.end(); }

}  // namespace smes::corpus
