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
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smes/corpus/types.hpp"
#include "smes/cues/backend.hpp"
#include "smes/eval/bertscore.hpp"
#include "smes/model/trainer.hpp"
#include "smes/reasoning/generate.hpp"

namespace smes::eval {

// One row of the ablation tables.
struct TaskMetrics {
  double task1_acc = 0.0;   // user emotion accuracy
  double task2_acc = 0.0;   // strategy accuracy
  double task3_wf1 = 0.0;   // system emotion weighted F1
  double task4_ppl = 0.0;   // response perplexity
  double bleu2 = 0.0;
  double bleu4 = 0.0;
  double rouge_l = 0.0;

  bool operator==(const TaskMetrics&) const = default;
};

// Column headers in rendering order.
inline constexpr std::array<std::string_view, 7> kAblationColumns = {
    "Task1 Acc", "Task2 Acc", "Task3 W-F1", "Task4 PPL", "B-2", "B-4", "R-L"};

struct AblationReport {
  std::string variant;
  TaskMetrics metrics;
  TaskMetrics delta;  // metrics minus baseline
  std::vector<double> loss_curve;

  bool operator==(const AblationReport&) const = default;
};

struct AblationConfig {
  model::ModelConfig model;
  model::TrainOptions training;        // on_epoch is ignored
  reasoning::SegmentSchema base_schema;
  reasoning::DecodeConfig decode;      // history_budget follows model.context_len
  bool parallel = false;               // one thread per variant; same results
};

// Trains and evaluates each variant with the same seed and configuration.
// A baseline run is always made for the deltas. Throws
// smes::Error("unknown_variant") before any training starts.
std::vector<AblationReport> run_ablation(std::span<const std::string> variants, const corpus::Corpus& train_corpus,
                                         const corpus::Corpus& eval_corpus, const cues::CueBackend& cues,
                                         const AblationConfig& config);

nlohmann::json to_json(const AblationReport& r);
nlohmann::json to_json(std::span<const AblationReport> reports);

// Pipe table with one row per report. Rates are percentages; every cell
// after the baseline row carries its signed delta.
std::string render_ablation_table(std::span<const AblationReport> reports);

}  // namespace smes::eval
