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

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "smes/corpus/types.hpp"

namespace smes::corpus {

// items x categories; each cell counts the raters who chose that category.
using RatingMatrix = std::vector<std::vector<std::int64_t>>;

// Fleiss' kappa. Every row must sum to n_raters (>= 2); at least two items
// and two categories. If all ratings fall in one category the chance
// agreement is 1 and kappa is defined as 1.0.
double fleiss_kappa(const RatingMatrix& ratings, std::int64_t n_raters);

struct KappaScore {
  double kappa = 0.0;
  std::int64_t n_items = 0;
  std::int64_t n_excluded = 0;  // turns without >= 2 first-pass annotations
};

struct AgreementReport {
  KappaScore emotion;   // all turns
  KappaScore strategy;  // therapist turns
};

// Builds rating matrices from raw_annotations and scores both label kinds.
AgreementReport agreement_report(const Corpus& corpus);

nlohmann::json agreement_report_json(const AgreementReport& report);

}  // namespace smes::corpus
