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

#include <optional>
#include <string>
#include <string_view>

#include "smes/cues/backend.hpp"

namespace smes::cues {

inline constexpr std::string_view kCueMarker = "[CUE]";
inline constexpr std::string_view kUtteranceMarker = "[UTT]";

// Which segments survive composition; the modality ablations clear one.
struct CompositionFlags {
  bool include_cue = true;
  bool include_utterance = true;

  bool operator==(const CompositionFlags&) const = default;
};

// M_t: the cue concatenated with the user utterance.
struct TurnContext {
  EmotionCue cue;
  std::string utterance;
  std::string rendered;

  bool operator==(const TurnContext&) const = default;
};

// rendered = "[CUE] " + cue + " [UTT] " + utterance, dropping an empty
// segment together with its marker. '[' inside a segment is written "[[".
// Throws smes::Error("empty_turn_context") if both segments end up empty.
TurnContext compose_turn_context(EmotionCue cue, std::string utterance, CompositionFlags flags = {});

std::string escape_segment(std::string_view text);

// Inverse of the rendering above; nullopt when `rendered` is not well formed.
struct ContextSegments {
  std::string cue;
  std::string utterance;

  bool operator==(const ContextSegments&) const = default;
};
std::optional<ContextSegments> parse_rendered_context(std::string_view rendered);

}  // namespace smes::cues
