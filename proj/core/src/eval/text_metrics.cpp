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

#include "smes/eval/text_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::eval {
namespace {

using Tokens = std::vector<std::string>;

void check_pairs(std::span<const std::string> c, std::span<const std::string> r) {
  if (c.size() != r.size()) {
    throw Error("length_mismatch", std::to_string(c.size()) + " candidates for " + std::to_string(r.size()) +
                                       " references");
  }
  if (c.empty()) throw Error("empty_input", "no text pairs to score");
}

std::map<std::vector<std::string>, std::size_t> ngrams(const Tokens& t, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++out[Tokens(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(i + n))];
  return out;
}

std::size_t lcs(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

double bleu(std::span<const std::string> candidates, std::span<const std::string> references, int max_n) {
  check_pairs(candidates, references);
  if (max_n < 1) throw Error("invalid_order", "max_n must be >= 1");
  const auto n_orders = static_cast<std::size_t>(max_n);
  std::vector<std::size_t> matches(n_orders, 0), totals(n_orders, 0);
  std::size_t c_len = 0, r_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Tokens c = util::split_whitespace(candidates[i]);
    const Tokens r = util::split_whitespace(references[i]);
    c_len += c.size();
    r_len += r.size();
    for (std::size_t n = 1; n <= n_orders; ++n) {
      const auto cn = ngrams(c, n);
      const auto rn = ngrams(r, n);
      for (const auto& [g, count] : cn) {
        auto it = rn.find(g);
        if (it != rn.end()) matches[n - 1] += std::min(count, it->second);
        totals[n - 1] += count;
      }
    }
  }
  if (c_len == 0) return r_len == 0 ? 1.0 : 0.0;
  if (matches[0] == 0) return 0.0;

  double log_sum = 0.0;
  for (std::size_t n = 0; n < n_orders; ++n) {
    const double p = matches[n] > 0 ? static_cast<double>(matches[n]) / static_cast<double>(totals[n])
                                    : 1.0 / static_cast<double>(totals[n] + 1);
    log_sum += std::log(p);
  }
  const double bp = c_len < r_len ? std::exp(1.0 - static_cast<double>(r_len) / static_cast<double>(c_len)) : 1.0;
  return std::clamp(bp * std::exp(log_sum / static_cast<double>(n_orders)), 0.0, 1.0);
}

double rouge_l(std::span<const std::string> candidates, std::span<const std::string> references) {
  check_pairs(candidates, references);
  const double b2 = kRougeBeta * kRougeBeta;
  double total = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Tokens c = util::split_whitespace(candidates[i]);
    const Tokens r = util::split_whitespace(references[i]);
    if (c.empty() || r.empty()) {
      total += (c.empty() && r.empty()) ? 1.0 : 0.0;
      continue;
    }
    const auto l = static_cast<double>(lcs(c, r));
    if (l == 0.0) continue;
    const double p = l / static_cast<double>(c.size());
    const double rec = l / static_cast<double>(r.size());
    total += (1.0 + b2) * p * rec / (rec + b2 * p);
  }
  return total / static_cast<double>(candidates.size());
}

}  // namespace smes::eval
