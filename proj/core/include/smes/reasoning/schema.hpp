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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "smes/cues/context.hpp"
#include "smes/roles.hpp"

namespace smes::reasoning {

enum class LossPolicy : std::uint8_t { kTargetsOnly, kFullSequence };

std::string_view to_string(LossPolicy p);
std::optional<LossPolicy> parse_loss_policy(std::string_view name);

// Layout of a linearized sequence: one atomic marker per role, which role
// spans are emitted, which positions carry loss, and which context segments
// survive turn composition.
struct SegmentSchema {
  std::array<std::string, kNumRoles> markers = {"<hist>", "<usr_emo>", "<strat>", "<sys_emo>", "<resp>"};
  std::array<bool, kNumRoles> include = {true, true, true, true, true};
  LossPolicy loss_policy = LossPolicy::kTargetsOnly;
  cues::CompositionFlags composition;

  bool includes(Role r) const { return include[index_of(r)]; }
  const std::string& marker(Role r) const { return markers[index_of(r)]; }

  // Markers pairwise distinct and non-empty; RESP included.
  void validate() const;

  bool operator==(const SegmentSchema&) const = default;
};

enum class Ablation : std::uint8_t { kBaseline, kNoVideo, kNoText, kNoEmotion, kNoStrategy };

inline constexpr std::array<Ablation, 5> kAllAblations = {Ablation::kBaseline, Ablation::kNoVideo, Ablation::kNoText,
                                                          Ablation::kNoEmotion, Ablation::kNoStrategy};

std::string_view to_string(Ablation a);  // "baseline", "-video", ...
// Throws smes::Error("unknown_variant"), or ("invalid_ablation") for an
// attempt to remove the response span.
Ablation parse_ablation(std::string_view name);

// -video drops cue segments, -text drops utterance segments, -emotion and
// -strategy drop the USR_EMO and STRAT spans.
SegmentSchema apply_ablation(SegmentSchema schema, Ablation variant);
SegmentSchema apply_ablation(SegmentSchema schema, std::string_view variant);

// Applies KEY=VAL overrides: loss=targets_only|full_sequence,
// include.<ROLE>=0|1, marker.<ROLE>=TOKEN, cue=0|1, utterance=0|1.
void apply_schema_override(SegmentSchema& schema, std::string_view assignment);

// {"composition": {"cue", "utterance"}, "include": {ROLE: bool},
//  "loss": policy, "markers": {ROLE: token}}
nlohmann::json to_json(const SegmentSchema& schema);
// Throws smes::Error("invalid_schema").
SegmentSchema segment_schema_from_json(const nlohmann::json& doc);

}  // namespace smes::reasoning
