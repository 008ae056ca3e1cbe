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

#include "smes/eval/human.hpp"

#include <algorithm>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::eval {

HumanEvalTally human_eval_tally(std::span<const Judgment> judgments) {
  HumanEvalTally out;
  for (const auto& j : judgments) {
    if (std::find(kHumanEvalDimensions.begin(), kHumanEvalDimensions.end(), j.dimension) ==
        kHumanEvalDimensions.end()) {
      throw Error("unknown_dimension", "unknown human-evaluation dimension '" + j.dimension + "'");
    }
    auto& t = out.dimensions[j.dimension];
    if (j.verdict == "win") {
      ++t.win;
    } else if (j.verdict == "tie") {
      ++t.tie;
    } else if (j.verdict == "loss") {
      ++t.loss;
    } else {
      throw Error("unknown_verdict", "verdict must be win, tie or loss, got '" + j.verdict + "'");
    }
  }
  for (auto& [_, t] : out.dimensions) {
    const auto n = static_cast<double>(t.total());
    t.win_pct = 100.0 * static_cast<double>(t.win) / n;
    t.tie_pct = 100.0 * static_cast<double>(t.tie) / n;
    t.loss_pct = 100.0 * static_cast<double>(t.loss) / n;
  }
  return out;
}

nlohmann::json to_json(const HumanEvalTally& tally) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [dim, t] : tally.dimensions) {
    out[dim] = {{"loss", util::round_to(t.loss_pct, 1)},
                {"n", t.total()},
                {"tie", util::round_to(t.tie_pct, 1)},
                {"win", util::round_to(t.win_pct, 1)}};
  }
  return out;
}

}  // namespace smes::eval
