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

#include "smes/eval/classify.hpp"

#include <unordered_map>

#include "smes/error.hpp"

namespace smes::eval {

ClassificationResult classify_eval(std::span<const std::string> preds, std::span<const std::string> golds,
                                   std::span<const std::string> label_set) {
  if (preds.size() != golds.size()) {
    throw Error("length_mismatch", std::to_string(preds.size()) + " predictions for " + std::to_string(golds.size()) +
                                       " gold labels");
  }
  if (golds.empty()) throw Error("empty_input", "no labels to evaluate");
  if (label_set.empty()) throw Error("empty_input", "empty label set");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < label_set.size(); ++i) index.emplace(label_set[i], i);
  auto lookup = [&](const std::string& label) {
    auto it = index.find(label);
    if (it == index.end()) throw Error("unknown_label", "label '" + label + "' is not in the label set");
    return it->second;
  };

  const std::size_t k = label_set.size();
  ClassificationResult r;
  r.labels.assign(label_set.begin(), label_set.end());
  r.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < golds.size(); ++i) ++r.confusion[lookup(golds[i])][lookup(preds[i])];

  std::size_t correct = 0;
  double weighted = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t predicted = 0;
    std::size_t support = 0;
    for (std::size_t j = 0; j < k; ++j) {
      predicted += r.confusion[j][c];
      support += r.confusion[c][j];
    }
    const std::size_t tp = r.confusion[c][c];
    correct += tp;
    LabelMetrics m;
    m.support = support;
    m.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = support ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    weighted += static_cast<double>(support) * m.f1;
    r.per_label[label_set[c]] = m;
  }
  const auto n = static_cast<double>(golds.size());
  r.accuracy = static_cast<double>(correct) / n;
  r.weighted_f1 = weighted / n;
  return r;
}

namespace {

template <typename Label, typename AllFn>
ClassificationResult classify_labels(std::span<const Label> preds, std::span<const Label> golds, AllFn all) {
  std::vector<std::string> p, g, set;
  for (auto x : preds) p.emplace_back(to_string(x));
  for (auto x : golds) g.emplace_back(to_string(x));
  for (auto x : all()) set.emplace_back(to_string(x));
  return classify_eval(p, g, set);
}

}  // namespace

ClassificationResult classify_eval(std::span<const Emotion> preds, std::span<const Emotion> golds) {
  return classify_labels(preds, golds, all_emotions);
}

ClassificationResult classify_eval(std::span<const Strategy> preds, std::span<const Strategy> golds) {
  return classify_labels(preds, golds, all_strategies);
}

nlohmann::json to_json(const ClassificationResult& r) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [label, m] : r.per_label) {
    per[label] = {{"f1", m.f1}, {"precision", m.precision}, {"recall", m.recall}, {"support", m.support}};
  }
  return {{"accuracy", r.accuracy},
          {"confusion", r.confusion},
          {"labels", r.labels},
          {"per_label", per},
          {"weighted_f1", r.weighted_f1}};
}

}  // namespace smes::eval
