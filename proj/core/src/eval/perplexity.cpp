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

#include "smes/eval/perplexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smes/error.hpp"
#include "smes/reasoning/linearize.hpp"

namespace smes::eval {

using model::Vocab;

double perplexity(const reasoning::Generator& generator, std::span<const reasoning::TurnExample> examples,
                  const reasoning::SegmentSchema& schema, std::size_t history_budget) {
  if (examples.empty()) throw Error("empty_input", "no examples for perplexity");
  schema.validate();
  const Vocab& vocab = generator.vocab();
  std::vector<int> response_ids;
  for (int id = 0; id < vocab.size(); ++id) {
    if (vocab.is_response_token(id)) response_ids.push_back(id);
  }

  double nll = 0.0;
  std::size_t count = 0;
  for (const auto& ex : examples) {
    const std::vector<int> response = vocab.encode_text(ex.gold.response);
    if (response.empty()) {
      throw Error("empty_response", "example " + ex.dialogue_id + "#" + std::to_string(ex.turn_index) +
                                        " has no response tokens");
    }
    const std::vector<int> enc = reasoning::encode_history(ex.history, schema, vocab, history_budget);
    std::vector<int> seq{Vocab::kBos};
    seq.insert(seq.end(), enc.begin(), enc.end());
    auto label = [&](Role role, int token) {
      if (!schema.includes(role)) return;
      seq.push_back(reasoning::marker_id(schema, role, vocab));
      seq.push_back(token);
    };
    label(Role::kUsrEmo, vocab.user_emotion_token(ex.gold.user_emotion));
    label(Role::kStrat, vocab.strategy_token(ex.gold.strategy));
    label(Role::kSysEmo, vocab.system_emotion_token(ex.gold.system_emotion));
    seq.push_back(reasoning::marker_id(schema, Role::kResp, vocab));
    const std::size_t first = seq.size() - 1;
    seq.insert(seq.end(), response.begin(), response.end());

    std::vector<int> targets = response;
    targets.push_back(Vocab::kEos);
    auto session = generator.start(enc);
    const auto rows = session->prefix_logits(seq, first);
    if (rows.size() != targets.size()) throw Error("bad_logits", "generator returned the wrong number of steps");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& logits = rows[i];
      if (static_cast<int>(logits.size()) != vocab.size()) throw Error("bad_logits", "logit row has the wrong size");
      double m = -std::numeric_limits<double>::infinity();
      for (int id : response_ids) m = std::max(m, logits[static_cast<std::size_t>(id)]);
      double z = 0.0;
      for (int id : response_ids) z += std::exp(logits[static_cast<std::size_t>(id)] - m);
      nll += m + std::log(z) - logits[static_cast<std::size_t>(targets[i])];
      ++count;
    }
  }
  return std::exp(nll / static_cast<double>(count));
}

}  // namespace smes::eval
