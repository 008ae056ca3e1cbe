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

#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "smes/eval/bertscore.hpp"
#include "smes/eval/classify.hpp"
#include "smes/reasoning/examples.hpp"
#include "smes/reasoning/generate.hpp"

namespace smes::eval {

struct GenerationResult {
  double bleu2 = 0.0;
  double bleu4 = 0.0;
  double rouge_l = 0.0;
  double perplexity = 0.0;
  std::optional<double> bertscore;

  bool operator==(const GenerationResult&) const = default;
};

struct EvaluationReport {
  std::size_t n_examples = 0;
  ClassificationResult user_emotion;    // Task1
  ClassificationResult strategy;        // Task2
  ClassificationResult system_emotion;  // Task3
  GenerationResult generation;          // Task4
  std::vector<reasoning::PipelineOutput> outputs;

  bool operator==(const EvaluationReport&) const = default;
};

struct EvaluateOptions {
  reasoning::DecodeConfig decode;
  const TokenEmbedder* embedder = nullptr;  // BERTScore skipped when null
  bool labels_only = false;                 // skip response decoding and text metrics
};

// Runs sequential_generate on every example and scores all four tasks.
EvaluationReport evaluate(const reasoning::Generator& generator, std::span<const reasoning::TurnExample> examples,
                          const reasoning::SegmentSchema& schema, const EvaluateOptions& options = {});

// Fraction of label stages (three per example) whose greedy prediction
// equals the gold label.
double label_exact_match(const reasoning::Generator& generator, std::span<const reasoning::TurnExample> examples,
                         const reasoning::SegmentSchema& schema, std::size_t history_budget);

nlohmann::json to_json(const GenerationResult& r);
// Metrics only; per-example outputs are omitted.
nlohmann::json to_json(const EvaluationReport& r);

}  // namespace smes::eval
