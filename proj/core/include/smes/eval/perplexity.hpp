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

#include <span>

#include "smes/reasoning/examples.hpp"
#include "smes/reasoning/generator.hpp"
#include "smes/reasoning/schema.hpp"

namespace smes::eval {

// exp of the mean NLL of the gold response tokens and the closing <eos>,
// teacher-forced behind the gold label spans the schema includes. Each
// step's distribution is renormalized over the response sub-vocabulary
// (<unk>, <eos> and text words), so a uniform model over W words scores
// W + 2. Throws smes::Error("empty_input") for no examples and
// ("empty_response") for an example without response tokens.
double perplexity(const reasoning::Generator& generator, std::span<const reasoning::TurnExample> examples,
                  const reasoning::SegmentSchema& schema, std::size_t history_budget = 256);

}  // namespace smes::eval
