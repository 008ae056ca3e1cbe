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

#include "smes/reasoning/examples.hpp"

#include "smes/reasoning/linearize.hpp"

namespace smes::reasoning {

cues::TurnContext context_for_turn(const corpus::Turn& turn, const cues::CueBackend& cue_backend,
                                   const SegmentSchema& schema) {
  cues::EmotionCue cue{"", cues::BackendKind::kNone, turn.index};
  if (schema.composition.include_cue) cue = cues::extract_cue(turn.clips, cue_backend, turn.index);
  const bool any = (schema.composition.include_cue && !cue.text.empty()) ||
                   (schema.composition.include_utterance && !turn.utterance.empty());
  if (!any) return cues::TurnContext{std::move(cue), turn.utterance, ""};
  return cues::compose_turn_context(std::move(cue), turn.utterance, schema.composition);
}

std::vector<TurnExample> build_examples(const corpus::Corpus& corpus, const cues::CueBackend& cue_backend,
                                        const SegmentSchema& schema) {
  std::vector<TurnExample> out;
  for (const auto& d : corpus.dialogues) {
    History history;
    const corpus::Turn* previous = nullptr;
    for (const auto& t : d.turns) {
      if (t.speaker == Speaker::kClient) {
        history.append_context(t.index, context_for_turn(t, cue_backend, schema));
      } else {
        if (previous != nullptr && previous->speaker == Speaker::kClient) {
          TurnExample ex;
          ex.dialogue_id = d.id;
          ex.turn_index = t.index;
          ex.history = history;
          ex.gold = TurnTargets{previous->emotion, t.strategy.value(), t.emotion, t.utterance};
          out.push_back(std::move(ex));
        }
        history.append_response(t.index, ResponseRecord{t.utterance, t.emotion, t.strategy});
      }
      previous = &t;
    }
  }
  return out;
}

std::vector<std::string> example_texts(const std::vector<TurnExample>& examples) {
  std::vector<std::string> texts;
  for (const auto& ex : examples) {
    for (const auto& e : ex.history.entries()) texts.push_back(render_entry(e));
    texts.push_back(ex.gold.response);
  }
  return texts;
}

}  // namespace smes::reasoning
