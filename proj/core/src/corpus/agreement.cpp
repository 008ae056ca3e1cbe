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

#include "smes/corpus/agreement.hpp"

#include <cmath>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::corpus {

double fleiss_kappa(const RatingMatrix& ratings, std::int64_t n_raters) {
  if (n_raters < 2) throw Error("invalid_ratings", "fleiss kappa needs at least two raters");
  if (ratings.size() < 2) throw Error("invalid_ratings", "fleiss kappa needs at least two items");
  const std::size_t n_cats = ratings.front().size();
  if (n_cats < 2) throw Error("invalid_ratings", "fleiss kappa needs at least two categories");

  const auto n_items = static_cast<double>(ratings.size());
  const auto r = static_cast<double>(n_raters);
  std::vector<double> category_totals(n_cats, 0.0);
  double agreement_sum = 0.0;
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    const auto& row = ratings[i];
    if (row.size() != n_cats) throw Error("invalid_ratings", "rating rows differ in width");
    std::int64_t row_sum = 0;
    double pairs = 0.0;
    for (std::size_t j = 0; j < n_cats; ++j) {
      if (row[j] < 0) throw Error("invalid_ratings", "negative rating count");
      row_sum += row[j];
      category_totals[j] += static_cast<double>(row[j]);
      pairs += static_cast<double>(row[j]) * static_cast<double>(row[j] - 1);
    }
    if (row_sum != n_raters) {
      throw Error("row_sum_mismatch", "item " + std::to_string(i) + " has " + std::to_string(row_sum) +
                                          " ratings, expected " + std::to_string(n_raters));
    }
    agreement_sum += pairs / (r * (r - 1.0));
  }
  const double p_bar = agreement_sum / n_items;
  double p_e = 0.0;
  for (double total : category_totals) {
    const double p = total / (n_items * r);
    p_e += p * p;
  }
  if (1.0 - p_e <= 1e-15) {
    if (std::abs(1.0 - p_bar) <= 1e-15) return 1.0;
    throw Error("degenerate_marginal", "degenerate marginal");
  }
  // Unanimous rows give p_bar == 1 exactly; keep the result exactly 1.0.
  if (p_bar == 1.0) return 1.0;
  return (p_bar - p_e) / (1.0 - p_e);
}

namespace {

template <typename Pick>
KappaScore score_turns(const Corpus& corpus, bool therapist_only, std::size_t n_categories, Pick pick) {
  RatingMatrix rows;
  KappaScore score;
  std::int64_t raters = 0;
  for (const auto& d : corpus.dialogues) {
    for (const auto& t : d.turns) {
      if (therapist_only && t.speaker != Speaker::kTherapist) continue;
      if (!t.raw_annotations || t.raw_annotations->size() < 2) {
        ++score.n_excluded;
        continue;
      }
      std::vector<std::int64_t> row(n_categories, 0);
      for (const auto& [annotator, a] : *t.raw_annotations) ++row[pick(a)];
      if (raters == 0) raters = static_cast<std::int64_t>(t.raw_annotations->size());
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw Error("no_annotated_turns", "no annotated turns");
  score.n_items = static_cast<std::int64_t>(rows.size());
  score.kappa = fleiss_kappa(rows, raters);
  return score;
}

}  // namespace

AgreementReport agreement_report(const Corpus& corpus) {
  AgreementReport report;
  report.emotion = score_turns(corpus, false, kNumEmotions,
                               [](const Annotation& a) { return index_of(a.emotion); });
  report.strategy = score_turns(corpus, true, kNumStrategies,
                                [](const Annotation& a) { return index_of(a.strategy.value()); });
  return report;
}

nlohmann::json agreement_report_json(const AgreementReport& report) {
  auto entry = [](const KappaScore& s) {
    return nlohmann::json{{"kappa", util::round_to(s.kappa, 6)},
                          {"n_items", s.n_items},
                          {"n_excluded", s.n_excluded}};
  };
  return {{"emotion", entry(report.emotion)}, {"strategy", entry(report.strategy)}};
}

}  // namespace smes::corpus
