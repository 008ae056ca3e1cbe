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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smes/corpus/types.hpp"

namespace smes::cues {

using corpus::ClipRef;

// The two questions put to the audio-visual model, byte for byte.
inline constexpr std::string_view kEmotionalStateQuestion = "What is the emotional state of the speaker?";
inline constexpr std::string_view kLifeDistressQuestion =
    "What life distress might explain the speaker’s emotional expression and posture in this video?";

struct CuePrompt {
  std::string question_1;
  std::string question_2;
  std::vector<ClipRef> clips;  // the video/audio pair, or a subset of it
};

// Throws smes::Error("empty_clip_set") when clips is empty.
CuePrompt build_cue_prompt(std::span<const ClipRef> clips);

// Human-readable form, e.g. "Video [s1e01 0.5-4.0]; Audio [...]:\nQuestion 1: ...".
std::string render_prompt(const CuePrompt& prompt);

// Digest of the question text; part of the cue cache key.
std::string prompt_hash(const CuePrompt& prompt);

}  // namespace smes::cues
