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
#include <string>

namespace smes::eval {

// Corpus-level BLEU over whitespace tokens: clipped n-gram precisions for
// orders 1..max_n combined by geometric mean, times exp(1 - r/c) when the
// candidate total c is shorter than the reference total r. An order >= 2
// with no matches uses (0 + 1) / (total + 1). Empty candidates score 0
// unless the references are empty too, which scores 1.
// Throws smes::Error("empty_input" / "length_mismatch" / "invalid_order").
double bleu(std::span<const std::string> candidates, std::span<const std::string> references, int max_n);

// Mean over pairs of the LCS F-measure (1 + b^2) P R / (R + b^2 P), b = 1.2.
// Two empty texts score 1.
double rouge_l(std::span<const std::string> candidates, std::span<const std::string> references);

inline constexpr double kRougeBeta = 1.2;

}  // namespace smes::eval
