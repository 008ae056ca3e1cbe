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

#include <string>
#include <vector>

#include "smes/corpus/types.hpp"
#include "smes/cues/backend.hpp"
#include "smes/reasoning/history.hpp"
#include "smes/reasoning/schema.hpp"

namespace smes::reasoning {

// One supervised turn: the history up to a client turn and the following
// therapist turn as targets.
struct TurnExample {
  std::string dialogue_id;
  int turn_index = 0;  // index of the therapist turn
  History history;
  TurnTargets gold;
};

// Builds a context for a client turn. When the schema suppresses every
// available segment the context is kept with an empty rendering, so a turn
// never disappears from the history.
cues::TurnContext context_for_turn(const corpus::Turn& turn, const cues::CueBackend& cue_backend,
                                   const SegmentSchema& schema);

// One example per therapist turn that directly follows a client turn.
// Cues come from `cue_backend`; composition follows schema.composition.
std::vector<TurnExample> build_examples(const corpus::Corpus& corpus, const cues::CueBackend& cue_backend,
                                        const SegmentSchema& schema);

// All text a vocabulary for these examples needs to cover.
std::vector<std::string> example_texts(const std::vector<TurnExample>& examples);

}  // namespace smes::reasoning
