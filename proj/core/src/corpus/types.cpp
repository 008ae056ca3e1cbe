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

#include "smes/corpus/types.hpp"

#include <sstream>

namespace smes::corpus {

std::string_view to_string(ClipKind k) { return k == ClipKind::kVideo ? "video" : "audio"; }

std::optional<ClipKind> parse_clip_kind(std::string_view name) {
  if (name == "video") return ClipKind::kVideo;
  if (name == "audio") return ClipKind::kAudio;
  return std::nullopt;
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

std::string Location::describe() const {
  std::ostringstream os;
  const char* sep = "";
  if (line > 0) {
    os << "line " << line;
    sep = ", ";
  }
  if (!dialogue_id.empty()) {
    os << sep << "dialogue " << dialogue_id;
    sep = ", ";
  }
  if (turn_index > 0) {
    os << sep << "turn " << turn_index;
    sep = ", ";
  }
  if (!field.empty()) os << sep << "field " << field;
  return os.str();
}

namespace {

std::string with_location(const std::string& message, const Location& where) {
  const std::string loc = where.describe();
  return loc.empty() ? message : message + " (" + loc + ")";
}

}  // namespace

CorpusError::CorpusError(std::string kind, const std::string& message, Location where)
    : Error(std::move(kind), with_location(message, where)), where_(std::move(where)) {}

}  // namespace smes::corpus
