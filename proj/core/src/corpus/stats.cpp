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

#include "smes/corpus/stats.hpp"

#include <cmath>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::corpus {

double Ratio::rounded(int decimals) const {
  // Half-up on the exact ratio: floor((num * 10^d) / den + 1/2).
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const std::int64_t scaled = (2 * num * scale + den) / (2 * den);
  return static_cast<double>(scaled) / static_cast<double>(scale);
}

std::int64_t count_tokens(std::string_view text) {
  return static_cast<std::int64_t>(util::split_whitespace(text).size());
}

CorpusStats compute_stats(const Corpus& corpus) {
  if (corpus.dialogues.empty()) throw Error("empty_corpus", "cannot compute statistics of an empty corpus");
  CorpusStats s;
  std::int64_t tokens = 0;
  s.n_dialogues = static_cast<std::int64_t>(corpus.dialogues.size());
  for (const auto& d : corpus.dialogues) {
    ++s.scenario_histogram[d.scenario];
    for (const auto& t : d.turns) {
      ++s.n_utterances_total;
      if (t.speaker == Speaker::kTherapist) {
        ++s.n_utterances_therapist;
      } else {
        ++s.n_utterances_client;
      }
      ++s.emotion_histogram[index_of(t.emotion)];
      if (t.strategy) ++s.strategy_histogram[index_of(*t.strategy)];
      tokens += count_tokens(t.utterance);
    }
  }
  s.avg_dialogue_len = Ratio{s.n_utterances_total, s.n_dialogues};
  s.avg_utterance_len = Ratio{tokens, s.n_utterances_total};
  return s;
}

int phase_bucket(std::int64_t k, std::int64_t n, int n_buckets) {
  // smallest i with k/n <= i/b  <=>  i = ceil(k*b/n)
  return static_cast<int>((k * n_buckets + n - 1) / n);
}

PhaseDistribution strategy_phase_distribution(const Corpus& corpus, int n_buckets) {
  if (n_buckets < 1) throw Error("invalid_argument", "n_buckets must be >= 1");
  PhaseDistribution dist;
  dist.n_buckets = n_buckets;
  for (auto& row : dist.counts) row.assign(static_cast<std::size_t>(n_buckets), 0);
  for (const auto& d : corpus.dialogues) {
    const auto n = static_cast<std::int64_t>(d.turns.size());
    for (const auto& t : d.turns) {
      if (t.speaker != Speaker::kTherapist || !t.strategy) continue;
      const int bucket = phase_bucket(t.index, n, n_buckets);
      ++dist.counts[index_of(*t.strategy)][static_cast<std::size_t>(bucket - 1)];
    }
  }
  return dist;
}

nlohmann::json stats_report(const CorpusStats& s) {
  nlohmann::json emotions = nlohmann::json::object();
  for (auto e : all_emotions()) emotions[std::string(to_string(e))] = s.emotion_histogram[index_of(e)];
  nlohmann::json strategies = nlohmann::json::object();
  for (auto st : all_strategies()) strategies[std::string(to_string(st))] = s.strategy_histogram[index_of(st)];
  nlohmann::json scenarios = nlohmann::json::object();
  for (const auto& [tag, n] : s.scenario_histogram) scenarios[tag] = n;
  return {
      {"n_dialogues", s.n_dialogues},
      {"n_utterances_total", s.n_utterances_total},
      {"n_utterances_therapist", s.n_utterances_therapist},
      {"n_utterances_client", s.n_utterances_client},
      {"avg_dialogue_len", s.avg_dialogue_len.rounded(1)},
      {"avg_utterance_len", s.avg_utterance_len.rounded(1)},
      {"emotion_histogram", std::move(emotions)},
      {"strategy_histogram", std::move(strategies)},
      {"scenario_histogram", std::move(scenarios)},
  };
}

nlohmann::json phase_report(const PhaseDistribution& dist) {
  nlohmann::json rows = nlohmann::json::object();
  for (auto st : all_strategies()) rows[std::string(to_string(st))] = dist.counts[index_of(st)];
  return {{"n_buckets", dist.n_buckets}, {"distribution", std::move(rows)}};
}

}  // namespace smes::corpus
