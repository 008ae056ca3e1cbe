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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smes/error.hpp"
#include "smes/labels.hpp"

namespace smes::corpus {

enum class ClipKind : std::uint8_t { kVideo, kAudio };

std::string_view to_string(ClipKind k);
std::optional<ClipKind> parse_clip_kind(std::string_view name);

// A time span of one media stream aligned to an utterance.
struct ClipRef {
  std::string media_id;
  double start_s = 0.0;
  double end_s = 0.0;
  ClipKind kind = ClipKind::kVideo;

  bool operator==(const ClipRef&) const = default;
};

// One first-pass label assignment. The adjudicated label lives on the Turn.
struct Annotation {
  Emotion emotion = Emotion::kNeutral;
  std::optional<Strategy> strategy;

  bool operator==(const Annotation&) const = default;
};

struct Turn {
  int index = 0;  // 1-based
  Speaker speaker = Speaker::kClient;
  std::string utterance;
  Emotion emotion = Emotion::kNeutral;
  std::optional<Strategy> strategy;  // present iff speaker is the therapist
  std::vector<ClipRef> clips;
  std::optional<std::map<std::string, Annotation>> raw_annotations;

  bool operator==(const Turn&) const = default;
};

struct Dialogue {
  std::string id;
  std::string scenario;
  std::vector<Turn> turns;

  bool operator==(const Dialogue&) const = default;
};

enum class Split : std::uint8_t { kTrain, kVal, kTest };

std::string_view to_string(Split s);
std::optional<Split> parse_split(std::string_view name);

struct Corpus {
  Split split = Split::kTrain;
  std::vector<Dialogue> dialogues;

  bool operator==(const Corpus&) const = default;
};

// Where a validation failure happened. Empty fields mean "not applicable".
struct Location {
  std::size_t line = 0;  // 1-based line in the source stream, 0 if unknown
  std::string dialogue_id;
  int turn_index = 0;
  std::string field;

  std::string describe() const;
};

class CorpusError : public Error {
 public:
  CorpusError(std::string kind, const std::string& message, Location where);

  const Location& where() const noexcept { return where_; }

 private:
  Location where_;
};

}  // namespace smes::corpus
