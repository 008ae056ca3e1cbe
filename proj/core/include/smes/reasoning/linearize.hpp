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
#include <optional>
#include <span>
#include <vector>

#include "smes/model/vocab.hpp"
#include "smes/reasoning/history.hpp"
#include "smes/reasoning/schema.hpp"

namespace smes::reasoning {

// Y = [H_t, E_t, S_t, SE_t, R_t] as token ids with per-token role tags and
// loss mask.
struct TrainingSequence {
  std::vector<int> tokens;
  std::vector<Role> roles;
  std::vector<std::uint8_t> loss_mask;

  std::size_t size() const { return tokens.size(); }
  // Tokens of the HIST span (the encoder input).
  std::vector<int> history_span() const;
};

// Renders one history entry as text: contexts use their rendered M_t,
// responses are written "[SYS] " + escaped text.
std::string render_entry(const HistoryEntry& entry);

// HIST span tokens: the HIST marker followed by the rendered entries. When
// `budget` > 0 and the span would exceed it, the oldest entries are dropped
// first; the final context is always kept.
std::vector<int> encode_history(const History& history, const SegmentSchema& schema, const model::Vocab& vocab,
                                std::size_t budget = 0);

// Throws smes::Error("marker_not_atomic") if a schema marker is not a
// special vocabulary entry.
int marker_id(const SegmentSchema& schema, Role role, const model::Vocab& vocab);

TrainingSequence linearize(const History& history, const TurnTargets& gold, const SegmentSchema& schema,
                           const model::Vocab& vocab, std::size_t history_budget = 0);

// A contiguous run of one role.
struct RoleSpan {
  Role role;
  std::size_t begin;
  std::size_t end;  // exclusive

  bool operator==(const RoleSpan&) const = default;
};

std::vector<RoleSpan> role_spans(std::span<const Role> roles);

// Recovers role tags from token ids alone by reading the markers; nullopt
// if the markers are missing or out of order.
std::optional<std::vector<Role>> parse_roles(std::span<const int> tokens, const SegmentSchema& schema,
                                             const model::Vocab& vocab);

}  // namespace smes::reasoning
