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


#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "smes/corpus/agreement.hpp"
#include "smes/corpus/io.hpp"
#include "smes/corpus/stats.hpp"
#include "smes/util/util.hpp"
#include "test_support.hpp"

namespace smes::corpus {
namespace {

using nlohmann::json;
using smes::testing::fixture;
using smes::testing::read_file;

Corpus parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

std::string error_kind(const std::string& text) {
  try {
    parse_text(text);
  } catch (const CorpusError& e) {
    return e.kind();
  }
  return "accepted";
}

Turn make_turn(int index, Speaker speaker, std::string utterance, Emotion emotion = Emotion::kNeutral) {
  Turn t;
  t.index = index;
  t.speaker = speaker;
  t.utterance = std::move(utterance);
  t.emotion = emotion;
  if (speaker == Speaker::kTherapist) t.strategy = Strategy::kApproval;
  return t;
}

Dialogue four_turn_dialogue(std::string id, std::vector<std::string> utterances) {
  Dialogue d{std::move(id), "work_stress", {}};
  for (int i = 0; i < 4; ++i) {
    d.turns.push_back(make_turn(i + 1, i % 2 == 0 ? Speaker::kClient : Speaker::kTherapist,
                                utterances[static_cast<std::size_t>(i)]));
  }
  return d;
}

// Valid random corpus with annotated turns.
Corpus random_corpus(std::mt19937_64& rng) {
  const auto& scenarios = default_scenarios();
  Corpus c;
  const int n_dialogues = 1 + static_cast<int>(rng() % 6);
  for (int d = 0; d < n_dialogues; ++d) {
    Dialogue dlg{"r" + std::to_string(d), scenarios[rng() % scenarios.size()], {}};
    const int n = 2 + static_cast<int>(rng() % 30);
    double clock = 0.0;
    for (int i = 1; i <= n; ++i) {
      const Speaker sp = i == 1 ? Speaker::kClient : (i == 2 ? Speaker::kTherapist : (rng() % 2 ? Speaker::kClient : Speaker::kTherapist));
      std::string utt;
      for (std::size_t w = 0, nw = 1 + rng() % 8; w < nw; ++w) utt += (w ? " w" : "w") + std::to_string(rng() % 50);
      Turn t = make_turn(i, sp, utt, static_cast<Emotion>(rng() % kNumEmotions));
      if (t.strategy) t.strategy = static_cast<Strategy>(rng() % kNumStrategies);
      if (rng() % 3 == 0) {
        const double start = clock + static_cast<double>(rng() % 4);
        const double end = start + 0.5 + static_cast<double>(rng() % 4);
        clock = end;
        t.clips.push_back({"m" + std::to_string(d), start, end, ClipKind::kVideo});
      }
      std::map<std::string, Annotation> raw;
      for (const char* who : {"a1", "a2"}) {
        Annotation a{rng() % 4 ? t.emotion : static_cast<Emotion>(rng() % kNumEmotions), std::nullopt};
        if (t.strategy) a.strategy = rng() % 4 ? *t.strategy : static_cast<Strategy>(rng() % kNumStrategies);
        raw[who] = a;
      }
      t.raw_annotations = raw;
      dlg.turns.push_back(std::move(t));
    }
    c.dialogues.push_back(std::move(dlg));
  }
  return c;
}

double kappa_oracle(const RatingMatrix& m, double n) {
  const double items = static_cast<double>(m.size());
  std::vector<double> col(m[0].size(), 0.0);
  double p_bar = 0.0;
  for (const auto& row : m) {
    double sq = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      sq += static_cast<double>(row[j] * row[j]);
      col[j] += static_cast<double>(row[j]);
    }
    p_bar += (sq - n) / (n * (n - 1.0));
  }
  p_bar /= items;
  double pe = 0.0;
  for (double c : col) pe += (c / (items * n)) * (c / (items * n));
  return (p_bar - pe) / (1.0 - pe);
}

TEST(CorpusIo, BundledFixtureHasTwelveDialogues) {
  auto c = load_corpus(fixture("mini_train.jsonl").string());
  EXPECT_EQ(c.dialogues.size(), 12u);
  EXPECT_EQ(c.split, Split::kTrain);
}

TEST(CorpusIo, FixtureRoundTripIsByteIdentical) {
  const std::string text = read_file(fixture("mini_train.jsonl"));
  EXPECT_EQ(serialize_corpus(parse_text(text)), text);
}

TEST(CorpusIo, RandomCorporaRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Corpus c = random_corpus(rng);
    validate_corpus(c, ScenarioRegistry());
    const std::string once = serialize_corpus(c);
    const Corpus back = parse_text(once);
    EXPECT_EQ(back, c);
    EXPECT_EQ(serialize_corpus(back), once);
  }
}

TEST(CorpusIo, ValidRecordIsAccepted) {
  EXPECT_EQ(error_kind(smes::testing::corpus_text({smes::testing::valid_record()})), "accepted");
}

TEST(CorpusIo, CraftedInvalidRecordsAreRejected) {
  const auto cases = smes::testing::invalid_records();
  ASSERT_EQ(cases.size(), 10u);
  for (const auto& c : cases) EXPECT_EQ(error_kind(c.text), c.expected_kind) << c.name;
}

TEST(CorpusIo, ErrorsCarryLocation) {
  json r = smes::testing::valid_record();
  r["turns"][0]["strategy"] = "approval";
  try {
    parse_text(smes::testing::corpus_text({r}));
    FAIL() << "accepted";
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.where().dialogue_id, "x01");
    EXPECT_EQ(e.where().turn_index, 1);
    EXPECT_EQ(e.where().field, "strategy");
    EXPECT_EQ(e.where().line, 3u);
  }
}

TEST(CorpusIo, FurtherViolations) {
  json dup = smes::testing::valid_record();
  EXPECT_EQ(error_kind(smes::testing::corpus_text({dup, dup})), "duplicate_dialogue_id");

  json clients = smes::testing::valid_record();
  clients["turns"][1]["speaker"] = "client";
  clients["turns"][1].erase("strategy");
  EXPECT_EQ(error_kind(smes::testing::corpus_text({clients})), "missing_speaker_role");

  json speaker = smes::testing::valid_record();
  speaker["turns"][0]["speaker"] = "narrator";
  EXPECT_EQ(error_kind(smes::testing::corpus_text({speaker})), "unknown_speaker");

  json extra = smes::testing::valid_record();
  extra["mood"] = "grey";
  EXPECT_EQ(error_kind(smes::testing::corpus_text({extra})), "unknown_field");

  json missing = smes::testing::valid_record();
  missing.erase("scenario");
  EXPECT_EQ(error_kind(smes::testing::corpus_text({missing})), "missing_field");

  json negative = smes::testing::valid_record();
  negative["turns"][0]["clips"][0]["start_s"] = -1.0;
  EXPECT_EQ(error_kind(smes::testing::corpus_text({negative})), "invalid_clip_time");

  EXPECT_EQ(error_kind(smes::testing::valid_record().dump() + "\n"), "bad_schema_header");
  EXPECT_EQ(error_kind("#mesc-schema:2\n"), "schema_version_mismatch");
}

TEST(CorpusIo, TextOnlyTurnsAreValid) {
  json r = smes::testing::valid_record();
  r["turns"][0]["clips"] = json::array();
  EXPECT_EQ(error_kind(smes::testing::corpus_text({r})), "accepted");
}

TEST(CorpusIo, CustomScenarioRegistry) {
  json r = smes::testing::valid_record();
  r["scenario"] = "space_travel";
  ParseOptions opts;
  opts.scenarios = ScenarioRegistry({"space_travel"});
  std::istringstream in(smes::testing::corpus_text({r}));
  EXPECT_EQ(parse_corpus(in, opts).dialogues.at(0).scenario, "space_travel");
  EXPECT_EQ(default_scenarios().size(), 15u);
}

TEST(CorpusStats, ThreeDialoguesOfFourTurns) {
  Corpus c;
  for (int i = 0; i < 3; ++i) c.dialogues.push_back(four_turn_dialogue("d" + std::to_string(i), {"a", "b", "c", "d"}));
  auto s = compute_stats(c);
  EXPECT_EQ(s.n_dialogues, 3);
  EXPECT_EQ(s.n_utterances_total, 12);
  EXPECT_EQ(s.n_utterances_client, 6);
  EXPECT_EQ(s.n_utterances_therapist, 6);
  EXPECT_DOUBLE_EQ(s.avg_dialogue_len.value(), 4.0);
}

TEST(CorpusStats, AverageUtteranceLengthIsExact) {
  Corpus c;
  c.dialogues.push_back(four_turn_dialogue("d", {"a b", "c d e", "f", "g"}));
  auto s = compute_stats(c);
  EXPECT_EQ(s.avg_utterance_len, (Ratio{7, 4}));
  EXPECT_DOUBLE_EQ(s.avg_utterance_len.value(), 1.75);
}

TEST(CorpusStats, FixtureManifestsAreByteEqual) {
  auto c = load_corpus(fixture("mini_train.jsonl").string());
  EXPECT_EQ(util::canonical_dump(stats_report(compute_stats(c))), read_file(fixture("mini_train.stats.json")));
  EXPECT_EQ(util::canonical_dump(phase_report(strategy_phase_distribution(c, 4))),
            read_file(fixture("mini_train.phase.json")));
  EXPECT_EQ(util::canonical_dump(agreement_report_json(agreement_report(c))),
            read_file(fixture("mini_train.kappa.json")));
}

TEST(CorpusStats, HistogramSumsMatchCounts) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Corpus c = random_corpus(rng);
    const auto s = compute_stats(c);
    EXPECT_EQ(std::accumulate(s.emotion_histogram.begin(), s.emotion_histogram.end(), std::int64_t{0}),
              s.n_utterances_total);
    EXPECT_EQ(std::accumulate(s.strategy_histogram.begin(), s.strategy_histogram.end(), std::int64_t{0}),
              s.n_utterances_therapist);
    std::int64_t scen = 0;
    for (const auto& [tag, n] : s.scenario_histogram) scen += n;
    EXPECT_EQ(scen, s.n_dialogues);
    EXPECT_EQ(s.n_utterances_client + s.n_utterances_therapist, s.n_utterances_total);
  }
}

TEST(PhaseBuckets, BoundaryRule) {
  EXPECT_EQ(phase_bucket(7, 28, 4), 1);
  EXPECT_EQ(phase_bucket(8, 28, 4), 2);
  EXPECT_EQ(phase_bucket(28, 28, 4), 4);
  EXPECT_EQ(phase_bucket(1, 28, 4), 1);
  EXPECT_EQ(phase_bucket(3, 3, 1), 1);
}

TEST(PhaseBuckets, MatchesRationalDefinition) {
  for (std::int64_t n = 1; n <= 40; ++n) {
    for (std::int64_t k = 1; k <= n; ++k) {
      for (int b = 1; b <= 7; ++b) {
        int expect = 1;
        while (k * b > expect * n) ++expect;  // smallest i with k/n <= i/b
        EXPECT_EQ(phase_bucket(k, n, b), expect) << k << "/" << n << " b=" << b;
      }
    }
  }
}

TEST(PhaseBuckets, RowSumsEqualStrategyHistogram) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Corpus c = random_corpus(rng);
    const auto s = compute_stats(c);
    const int buckets = 1 + static_cast<int>(rng() % 6);
    const auto dist = strategy_phase_distribution(c, buckets);
    for (std::size_t i = 0; i < kNumStrategies; ++i) {
      ASSERT_EQ(dist.counts[i].size(), static_cast<std::size_t>(buckets));
      EXPECT_EQ(std::accumulate(dist.counts[i].begin(), dist.counts[i].end(), std::int64_t{0}),
                s.strategy_histogram[i]);
    }
  }
}

TEST(PhaseBuckets, RejectsZeroBuckets) {
  Corpus c;
  EXPECT_THROW(strategy_phase_distribution(c, 0), Error);
}

TEST(FleissKappa, PerfectAgreementIsOne) {
  RatingMatrix m = {{2, 0}, {0, 2}, {2, 0}, {0, 2}, {2, 0}};
  EXPECT_EQ(fleiss_kappa(m, 2), 1.0);
}

TEST(FleissKappa, FourItemClosedForm) {
  RatingMatrix m = {{2, 0}, {2, 0}, {0, 2}, {1, 1}};
  // P_bar = 3/4, P_e = (5/8)^2 + (3/8)^2 = 17/32.
  const double hand = (0.75 - 17.0 / 32.0) / (1.0 - 17.0 / 32.0);
  EXPECT_NEAR(hand, 7.0 / 15.0, 1e-15);
  EXPECT_NEAR(fleiss_kappa(m, 2), hand, 1e-12);
}

TEST(FleissKappa, AllSplitIsNegative) {
  RatingMatrix m = {{1, 1}, {1, 1}, {1, 1}};
  EXPECT_LT(fleiss_kappa(m, 2), 0.0);
  EXPECT_NEAR(fleiss_kappa(m, 2), -1.0, 1e-12);
}

TEST(FleissKappa, Errors) {
  auto kind = [](const RatingMatrix& m, std::int64_t n) {
    try {
      fleiss_kappa(m, n);
    } catch (const Error& e) {
      return e.kind();
    }
    return std::string("accepted");
  };
  EXPECT_EQ(kind({{2, 0}, {1, 0}}, 2), "row_sum_mismatch");
  EXPECT_EQ(kind({{2, 0}}, 2), "invalid_ratings");
  EXPECT_EQ(kind({{2}, {2}}, 2), "invalid_ratings");
  EXPECT_EQ(kind({{1, 1}, {2, 0}}, 1), "invalid_ratings");
  EXPECT_EQ(fleiss_kappa({{2, 0}, {2, 0}}, 2), 1.0);
}

TEST(FleissKappa, MatchesOracleAndPermutationInvariant) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t items = 2 + rng() % 20, cats = 2 + rng() % 5;
    const std::int64_t raters = 2 + static_cast<std::int64_t>(rng() % 5);
    RatingMatrix m(items, std::vector<std::int64_t>(cats, 0));
    for (auto& row : m) {
      for (std::int64_t r = 0; r < raters; ++r) row[rng() % cats] += 1;
    }
    std::vector<std::int64_t> col(cats, 0);
    bool unanimous = true;
    for (const auto& row : m) {
      unanimous &= std::count(row.begin(), row.end(), 0) == static_cast<long>(cats - 1);
      for (std::size_t j = 0; j < cats; ++j) col[j] += row[j];
    }
    const bool degenerate = std::count(col.begin(), col.end(), 0) == static_cast<long>(cats - 1);
    if (degenerate) continue;
    const double k = fleiss_kappa(m, raters);
    EXPECT_NEAR(k, kappa_oracle(m, static_cast<double>(raters)), 1e-12);
    EXPECT_GE(k, -1.0);
    EXPECT_LE(k, 1.0);
    EXPECT_EQ(k == 1.0, unanimous);

    std::vector<std::size_t> perm(cats);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RatingMatrix p = m;
    for (std::size_t i = 0; i < items; ++i) {
      for (std::size_t j = 0; j < cats; ++j) p[i][j] = m[i][perm[j]];
    }
    EXPECT_NEAR(fleiss_kappa(p, raters), k, 1e-12);
  }
}

Corpus annotated_agreeing_corpus() {
  auto c = load_corpus(fixture("mini_train.jsonl").string());
  for (auto& d : c.dialogues) {
    for (auto& t : d.turns) {
      t.raw_annotations = std::map<std::string, Annotation>{{"a1", {t.emotion, t.strategy}}, {"a2", {t.emotion, t.strategy}}};
    }
  }
  return c;
}

TEST(Agreement, FullAgreementGivesOnes) {
  auto r = agreement_report(annotated_agreeing_corpus());
  EXPECT_EQ(r.emotion.kappa, 1.0);
  EXPECT_EQ(r.strategy.kappa, 1.0);
  EXPECT_EQ(r.emotion.n_excluded, 0);
}

TEST(Agreement, OneInjectedDisagreementMatchesOracle) {
  Corpus c = annotated_agreeing_corpus();
  auto& turn = c.dialogues[0].turns[0];
  const Emotion other = turn.emotion == Emotion::kAnger ? Emotion::kJoy : Emotion::kAnger;
  (*turn.raw_annotations)["a2"].emotion = other;

  RatingMatrix m;
  for (const auto& d : c.dialogues) {
    for (const auto& t : d.turns) {
      std::vector<std::int64_t> row(kNumEmotions, 0);
      for (const auto& [who, a] : *t.raw_annotations) row[index_of(a.emotion)] += 1;
      m.push_back(row);
    }
  }
  auto r = agreement_report(c);
  EXPECT_NEAR(r.emotion.kappa, kappa_oracle(m, 2.0), 1e-12);
  EXPECT_LT(r.emotion.kappa, 1.0);
  EXPECT_EQ(r.strategy.kappa, 1.0);
}

TEST(Agreement, ExcludedTurnsAreCounted) {
  Corpus c = annotated_agreeing_corpus();
  c.dialogues[0].turns[0].raw_annotations.reset();
  auto r = agreement_report(c);
  EXPECT_EQ(r.emotion.n_excluded, 1);
}

TEST(Agreement, NoAnnotationsIsAnError) {
  Corpus c;
  c.dialogues.push_back(four_turn_dialogue("d", {"a", "b", "c", "d"}));
  try {
    agreement_report(c);
    FAIL() << "accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "no_annotated_turns");
  }
}

}  // namespace
}  // namespace smes::corpus
