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
#include <string>

#include "smes/corpus/scenario_registry.hpp"
#include "smes/corpus/types.hpp"

namespace smes::corpus {

inline constexpr const char* kSchemaVersion = "1";

struct ParseOptions {
  std::string schema_version = kSchemaVersion;
  ScenarioRegistry scenarios;
};

// Reads a line-delimited corpus file:
//
//   #mesc-schema:1
//   #split:train            (optional, defaults to train)
//   {"id":...,"scenario":...,"turns":[...]}
//   ...
//
// Throws CorpusError on the first violation, naming the line, dialogue,
// turn and field.
Corpus parse_corpus(std::istream& in, const ParseOptions& options = {});
Corpus load_corpus(const std::string& path, const ParseOptions& options = {});

// Canonical form: header lines, then one compact sorted-key JSON object per
// dialogue. parse_corpus(serialize_corpus(c)) == c, and canonical files
// round-trip byte for byte.
std::string serialize_corpus(const Corpus& corpus);

// Checks every Dialogue invariant. Used by the parser; exposed for corpora
// built in code.
void validate_dialogue(const Dialogue& dialogue, const ScenarioRegistry& scenarios,
                       std::size_t line = 0);
void validate_corpus(const Corpus& corpus, const ScenarioRegistry& scenarios);

}  // namespace smes::corpus
