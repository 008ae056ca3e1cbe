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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace smes {

// Closed label vocabularies. Enumerator order is the canonical order used
// for tie-breaking and report layout.
enum class Emotion : std::uint8_t {
  kAnger,
  kSadness,
  kDisgust,
  kDepression,
  kNeutral,
  kJoy,
  kFear,
};

enum class Strategy : std::uint8_t {
  kOpenQuestions,
  kApproval,
  kSelfDisclosure,
  kRestatement,
  kInterpretation,
  kAdvisement,
  kCommunicationSkills,
  kStructuringTheTherapy,
  kGuidingThePace,
  kOthers,
};

enum class Speaker : std::uint8_t { kClient, kTherapist };

inline constexpr std::size_t kNumEmotions = 7;
inline constexpr std::size_t kNumStrategies = 10;

inline constexpr std::array<std::string_view, kNumEmotions> kEmotionNames = {
    "anger", "sadness", "disgust", "depression", "neutral", "joy", "fear"};

inline constexpr std::array<std::string_view, kNumStrategies> kStrategyNames = {
    "open_questions",          "approval",
    "self_disclosure",         "restatement",
    "interpretation",          "advisement",
    "communication_skills",    "structuring_the_therapy",
    "guiding_the_pace",        "others"};

std::string_view to_string(Emotion e);
std::string_view to_string(Strategy s);
std::string_view to_string(Speaker s);

std::optional<Emotion> parse_emotion(std::string_view name);
std::optional<Strategy> parse_strategy(std::string_view name);
std::optional<Speaker> parse_speaker(std::string_view name);

const std::array<Emotion, kNumEmotions>& all_emotions();
const std::array<Strategy, kNumStrategies>& all_strategies();

constexpr std::size_t index_of(Emotion e) { return static_cast<std::size_t>(e); }
constexpr std::size_t index_of(Strategy s) { return static_cast<std::size_t>(s); }

}  // namespace smes
