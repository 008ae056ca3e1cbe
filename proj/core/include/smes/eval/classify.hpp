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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smes/labels.hpp"

namespace smes::eval {

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  bool operator==(const LabelMetrics&) const = default;
};

struct ClassificationResult {
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
  std::vector<std::string> labels;              // label_set order
  std::map<std::string, LabelMetrics> per_label;
  std::vector<std::vector<std::size_t>> confusion;  // [gold][pred]

  bool operator==(const ClassificationResult&) const = default;
};

// Accuracy and support-weighted F1. Precision or recall with a zero
// denominator is 0, as is F1 when both are 0. Throws smes::Error with kind
// "empty_input", "length_mismatch" or "unknown_label".
ClassificationResult classify_eval(std::span<const std::string> preds, std::span<const std::string> golds,
                                   std::span<const std::string> label_set);

ClassificationResult classify_eval(std::span<const Emotion> preds, std::span<const Emotion> golds);
ClassificationResult classify_eval(std::span<const Strategy> preds, std::span<const Strategy> golds);

nlohmann::json to_json(const ClassificationResult& r);

}  // namespace smes::eval
