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

#include "smes/eval/ablation.hpp"

#include <cstdio>
#include <future>
#include <map>
#include <sstream>

#include "smes/error.hpp"
#include "smes/eval/evaluate.hpp"
#include "smes/model/generators.hpp"

namespace smes::eval {
namespace {

struct VariantRun {
  TaskMetrics metrics;
  std::vector<double> loss_curve;
};

VariantRun run_variant(reasoning::Ablation variant, const corpus::Corpus& train_corpus,
                       const corpus::Corpus& eval_corpus, const cues::CueBackend& cues, const AblationConfig& config) {
  const auto schema = reasoning::apply_ablation(config.base_schema, variant);
  model::TrainOptions options = config.training;
  options.on_epoch = nullptr;
  auto trained = model::train(train_corpus, cues, schema, config.model, options);
  const model::TransformerGenerator generator(trained.checkpoint);

  const auto examples = reasoning::build_examples(eval_corpus, cues, schema);
  EvaluateOptions eo;
  eo.decode = config.decode;
  eo.decode.history_budget = static_cast<std::size_t>(config.model.context_len);
  const auto report = evaluate(generator, examples, schema, eo);

  VariantRun run;
  run.loss_curve = std::move(trained.loss_curve);
  run.metrics.task1_acc = report.user_emotion.accuracy;
  run.metrics.task2_acc = report.strategy.accuracy;
  run.metrics.task3_wf1 = report.system_emotion.weighted_f1;
  run.metrics.task4_ppl = report.generation.perplexity;
  run.metrics.bleu2 = report.generation.bleu2;
  run.metrics.bleu4 = report.generation.bleu4;
  run.metrics.rouge_l = report.generation.rouge_l;
  return run;
}

TaskMetrics minus(const TaskMetrics& a, const TaskMetrics& b) {
  return {a.task1_acc - b.task1_acc, a.task2_acc - b.task2_acc, a.task3_wf1 - b.task3_wf1, a.task4_ppl - b.task4_ppl,
          a.bleu2 - b.bleu2,         a.bleu4 - b.bleu4,         a.rouge_l - b.rouge_l};
}

std::array<double, 7> values(const TaskMetrics& m) {
  return {m.task1_acc, m.task2_acc, m.task3_wf1, m.task4_ppl, m.bleu2, m.bleu4, m.rouge_l};
}

nlohmann::json metrics_json(const TaskMetrics& m) {
  return {{"bleu2", m.bleu2},         {"bleu4", m.bleu4},         {"rouge_l", m.rouge_l},  {"task1_acc", m.task1_acc},
          {"task2_acc", m.task2_acc}, {"task3_wf1", m.task3_wf1}, {"task4_ppl", m.task4_ppl}};
}

std::string fixed2(double v, bool sign) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), sign ? "%+.2f" : "%.2f", v);
  return buf;
}

}  // namespace

std::vector<AblationReport> run_ablation(std::span<const std::string> variants, const corpus::Corpus& train_corpus,
                                         const corpus::Corpus& eval_corpus, const cues::CueBackend& cues,
                                         const AblationConfig& config) {
  if (variants.empty()) throw Error("empty_input", "no ablation variants given");
  std::vector<reasoning::Ablation> parsed;
  for (const auto& v : variants) parsed.push_back(reasoning::parse_ablation(v));

  // Runs are deterministic, so each distinct variant is trained once.
  std::map<reasoning::Ablation, VariantRun> runs;
  runs[reasoning::Ablation::kBaseline];
  for (auto a : parsed) runs[a];

  if (config.parallel) {
    std::map<reasoning::Ablation, std::future<VariantRun>> pending;
    for (auto& [a, _] : runs) {
      pending.emplace(a, std::async(std::launch::async, run_variant, a, std::cref(train_corpus),
                                    std::cref(eval_corpus), std::cref(cues), std::cref(config)));
    }
    for (auto& [a, f] : pending) runs[a] = f.get();
  } else {
    for (auto& [a, run] : runs) run = run_variant(a, train_corpus, eval_corpus, cues, config);
  }

  const TaskMetrics& base = runs.at(reasoning::Ablation::kBaseline).metrics;
  std::vector<AblationReport> out;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const auto& run = runs.at(parsed[i]);
    out.push_back({std::string(reasoning::to_string(parsed[i])), run.metrics, minus(run.metrics, base),
                   run.loss_curve});
  }
  return out;
}

nlohmann::json to_json(const AblationReport& r) {
  return {{"delta", metrics_json(r.delta)},
          {"loss_curve", r.loss_curve},
          {"metrics", metrics_json(r.metrics)},
          {"variant", r.variant}};
}

nlohmann::json to_json(std::span<const AblationReport> reports) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) rows.push_back(to_json(r));
  return {{"columns", kAblationColumns}, {"rows", rows}};
}

std::string render_ablation_table(std::span<const AblationReport> reports) {
  std::ostringstream os;
  os << "| Model |";
  for (auto c : kAblationColumns) os << ' ' << c << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < kAblationColumns.size(); ++i) os << "---|";
  os << '\n';
  for (const auto& r : reports) {
    os << "| " << r.variant << " |";
    const auto v = values(r.metrics);
    const auto d = values(r.delta);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double scale = i == 3 ? 1.0 : 100.0;  // PPL is not a rate
      os << ' ' << fixed2(v[i] * scale, false);
      if (r.variant != "baseline") os << " (" << fixed2(d[i] * scale, true) << ')';
      os << " |";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace smes::eval
