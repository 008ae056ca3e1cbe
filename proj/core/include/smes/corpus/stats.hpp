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
#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "smes/corpus/types.hpp"
#include "smes/labels.hpp"

namespace smes::corpus {

// Exact non-negative ratio; reports round it half-up to a fixed number of
// decimals.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  double rounded(int decimals) const;
  bool operator==(const Ratio& o) const { return num * o.den == o.num * den; }
};

struct CorpusStats {
  std::int64_t n_dialogues = 0;
  std::int64_t n_utterances_total = 0;
  std::int64_t n_utterances_therapist = 0;
  std::int64_t n_utterances_client = 0;
  Ratio avg_dialogue_len;   // utterances per dialogue
  Ratio avg_utterance_len;  // whitespace tokens per utterance
  std::array<std::int64_t, kNumEmotions> emotion_histogram{};
  std::array<std::int64_t, kNumStrategies> strategy_histogram{};
  std::map<std::string, std::int64_t> scenario_histogram;
};

CorpusStats compute_stats(const Corpus& corpus);

// Number of whitespace-separated tokens.
std::int64_t count_tokens(std::string_view text);

// Per-strategy counts over conversation-phase buckets. A therapist turn at
// global index k of an N-utterance dialogue has phase k/N and lands in the
// smallest bucket i (1-based) with k/N <= i/n_buckets.
struct PhaseDistribution {
  int n_buckets = 4;
  std::array<std::vector<std::int64_t>, kNumStrategies> counts;
};

PhaseDistribution strategy_phase_distribution(const Corpus& corpus, int n_buckets = 4);

// 1-based bucket for utterance k of n.
int phase_bucket(std::int64_t k, std::int64_t n, int n_buckets);

// Canonical report documents (sorted keys, two-space indent, trailing
// newline when dumped via util::canonical_dump).
nlohmann::json stats_report(const CorpusStats& stats);
nlohmann::json phase_report(const PhaseDistribution& dist);

}  // namespace smes::corpus
