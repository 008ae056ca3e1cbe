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

#include "smes/eval/evaluate.hpp"

#include "smes/error.hpp"
#include "smes/eval/perplexity.hpp"
#include "smes/eval/text_metrics.hpp"

namespace smes::eval {

EvaluationReport evaluate(const reasoning::Generator& generator, std::span<const reasoning::TurnExample> examples,
                          const reasoning::SegmentSchema& schema, const EvaluateOptions& options) {
  if (examples.empty()) throw Error("empty_input", "no examples to evaluate");
  reasoning::DecodeConfig decode = options.decode;
  if (options.labels_only) decode.max_response_tokens = 1;

  EvaluationReport r;
  r.n_examples = examples.size();
  std::vector<Emotion> ue_pred, ue_gold, se_pred, se_gold;
  std::vector<Strategy> st_pred, st_gold;
  std::vector<std::string> candidates, references;
  for (const auto& ex : examples) {
    auto out = reasoning::sequential_generate(generator, ex.history, schema, decode);
    ue_pred.push_back(out.user_emotion);
    ue_gold.push_back(ex.gold.user_emotion);
    st_pred.push_back(out.strategy);
    st_gold.push_back(ex.gold.strategy);
    se_pred.push_back(out.system_emotion);
    se_gold.push_back(ex.gold.system_emotion);
    candidates.push_back(out.response);
    references.push_back(ex.gold.response);
    r.outputs.push_back(std::move(out));
  }
  r.user_emotion = classify_eval(std::span<const Emotion>(ue_pred), std::span<const Emotion>(ue_gold));
  r.strategy = classify_eval(std::span<const Strategy>(st_pred), std::span<const Strategy>(st_gold));
  r.system_emotion = classify_eval(std::span<const Emotion>(se_pred), std::span<const Emotion>(se_gold));
  if (!options.labels_only) {
    r.generation.bleu2 = bleu(candidates, references, 2);
    r.generation.bleu4 = bleu(candidates, references, 4);
    r.generation.rouge_l = rouge_l(candidates, references);
    r.generation.perplexity = perplexity(generator, examples, schema, decode.history_budget);
    if (options.embedder) r.generation.bertscore = bertscore(candidates, references, options.embedder);
  }
  return r;
}

double label_exact_match(const reasoning::Generator& generator, std::span<const reasoning::TurnExample> examples,
                         const reasoning::SegmentSchema& schema, std::size_t history_budget) {
  EvaluateOptions opts;
  opts.labels_only = true;
  opts.decode.history_budget = history_budget;
  const auto r = evaluate(generator, examples, schema, opts);
  return (r.user_emotion.accuracy + r.strategy.accuracy + r.system_emotion.accuracy) / 3.0;
}

nlohmann::json to_json(const GenerationResult& r) {
  nlohmann::json j = {{"bleu2", r.bleu2}, {"bleu4", r.bleu4}, {"perplexity", r.perplexity}, {"rouge_l", r.rouge_l}};
  j["bertscore"] = r.bertscore ? nlohmann::json(*r.bertscore) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const EvaluationReport& r) {
  return {{"generation", to_json(r.generation)},
          {"n_examples", r.n_examples},
          {"strategy", to_json(r.strategy)},
          {"system_emotion", to_json(r.system_emotion)},
          {"user_emotion", to_json(r.user_emotion)}};
}

}  // namespace smes::eval
