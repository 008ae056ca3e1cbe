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
#include <map>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace smes::eval {

inline constexpr std::array<std::string_view, 5> kHumanEvalDimensions = {"fluency", "identification", "comfort",
                                                                        "suggestions", "overall"};

struct Judgment {
  std::string dimension;
  std::string verdict;  // win | tie | loss
};

struct DimensionTally {
  std::size_t win = 0, tie = 0, loss = 0;
  double win_pct = 0.0, tie_pct = 0.0, loss_pct = 0.0;

  std::size_t total() const { return win + tie + loss; }
  bool operator==(const DimensionTally&) const = default;
};

struct HumanEvalTally {
  std::map<std::string, DimensionTally> dimensions;  // only dimensions seen
};

// Throws smes::Error("unknown_dimension" / "unknown_verdict").
HumanEvalTally human_eval_tally(std::span<const Judgment> judgments);

// Percentages rounded to one decimal.
nlohmann::json to_json(const HumanEvalTally& tally);

}  // namespace smes::eval
