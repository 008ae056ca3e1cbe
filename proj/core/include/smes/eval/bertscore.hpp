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
#include <string_view>
#include <vector>

namespace smes::eval {

// Maps one token to a vector; vectors of one provider share a dimension.
class TokenEmbedder {
 public:
  virtual ~TokenEmbedder() = default;
  virtual std::string name() const = 0;
  virtual std::vector<double> embed(std::string_view token) const = 0;
};

// Counts of the token's character n-grams (n in [1, max_n]) hashed with
// FNV-1a into `dim` buckets, L2-normalized. Deterministic, no downloads.
class HashedNgramEmbedder final : public TokenEmbedder {
 public:
  explicit HashedNgramEmbedder(std::size_t dim = 512, std::size_t max_n = 3);
  std::string name() const override { return "hashed-char-ngram"; }
  std::vector<double> embed(std::string_view token) const override;

 private:
  std::size_t dim_;
  std::size_t max_n_;
};

double cosine(std::span<const double> a, std::span<const double> b);

// Greedy-matching F1 per pair over whitespace tokens, averaged: precision
// is the mean over candidate tokens of the best cosine against reference
// tokens, recall the converse. Two empty texts score 1, one empty text 0.
// Throws smes::Error("provider_unavailable") when `embedder` is null.
double bertscore(std::span<const std::string> candidates, std::span<const std::string> references,
                 const TokenEmbedder* embedder);

}  // namespace smes::eval
