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

#include "smes/eval/bertscore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::eval {

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dim, std::size_t max_n) : dim_(dim), max_n_(max_n) {
  if (dim_ == 0 || max_n_ == 0) throw Error("provider_unavailable", "embedder needs dim > 0 and max_n > 0");
}

std::vector<double> HashedNgramEmbedder::embed(std::string_view token) const {
  std::vector<double> v(dim_, 0.0);
  for (std::size_t n = 1; n <= max_n_; ++n) {
    for (std::size_t i = 0; i + n <= token.size(); ++i) {
      std::uint64_t h = 0xcbf29ce484222325ULL ^ n;
      for (std::size_t j = i; j < i + n; ++j) {
        h ^= static_cast<unsigned char>(token[j]);
        h *= 0x100000001b3ULL;
      }
      v[h % dim_] += 1.0;
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double bertscore(std::span<const std::string> candidates, std::span<const std::string> references,
                 const TokenEmbedder* embedder) {
  if (embedder == nullptr) throw Error("provider_unavailable", "no embedding provider configured");
  if (candidates.size() != references.size()) {
    throw Error("length_mismatch", "candidate and reference counts differ");
  }
  if (candidates.empty()) throw Error("empty_input", "no text pairs to score");

  double total = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto c = util::split_whitespace(candidates[i]);
    const auto r = util::split_whitespace(references[i]);
    if (c.empty() || r.empty()) {
      total += (c.empty() && r.empty()) ? 1.0 : 0.0;
      continue;
    }
    std::vector<std::vector<double>> ce, re;
    for (const auto& t : c) ce.push_back(embedder->embed(t));
    for (const auto& t : r) re.push_back(embedder->embed(t));
    std::vector<double> best_c(ce.size(), -1.0), best_r(re.size(), -1.0);
    for (std::size_t a = 0; a < ce.size(); ++a) {
      for (std::size_t b = 0; b < re.size(); ++b) {
        const double s = cosine(ce[a], re[b]);
        best_c[a] = std::max(best_c[a], s);
        best_r[b] = std::max(best_r[b], s);
      }
    }
    double p = 0.0, rec = 0.0;
    for (double s : best_c) p += s;
    for (double s : best_r) rec += s;
    p /= static_cast<double>(best_c.size());
    rec /= static_cast<double>(best_r.size());
    total += (p + rec) > 0.0 ? 2.0 * p * rec / (p + rec) : 0.0;
  }
  return total / static_cast<double>(candidates.size());
}

}  // namespace smes::eval
