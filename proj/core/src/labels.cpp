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

#include "smes/labels.hpp"

#include <algorithm>

namespace smes {
namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<Enum>(it - names.begin());
}

template <typename Enum, std::size_t N>
std::array<Enum, N> enumerate() {
  std::array<Enum, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<Enum>(i);
  return out;
}

}  // namespace

std::string_view to_string(Emotion e) { return kEmotionNames[index_of(e)]; }
std::string_view to_string(Strategy s) { return kStrategyNames[index_of(s)]; }
std::string_view to_string(Speaker s) {
  return s == Speaker::kClient ? "client" : "therapist";
}

std::optional<Emotion> parse_emotion(std::string_view name) {
  return lookup<Emotion>(kEmotionNames, name);
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  return lookup<Strategy>(kStrategyNames, name);
}

std::optional<Speaker> parse_speaker(std::string_view name) {
  if (name == "client") return Speaker::kClient;
  if (name == "therapist") return Speaker::kTherapist;
  return std::nullopt;
}

const std::array<Emotion, kNumEmotions>& all_emotions() {
  static const auto kAll = enumerate<Emotion, kNumEmotions>();
  return kAll;
}

const std::array<Strategy, kNumStrategies>& all_strategies() {
  static const auto kAll = enumerate<Strategy, kNumStrategies>();
  return kAll;
}

}  // namespace smes
