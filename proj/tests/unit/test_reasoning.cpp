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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "smes/corpus/io.hpp"
#include "smes/model/generators.hpp"
#include "smes/reasoning/examples.hpp"
#include "smes/reasoning/generate.hpp"
#include "smes/reasoning/linearize.hpp"
#include "test_support.hpp"

namespace smes::reasoning {
namespace {

using model::Vocab;
using smes::testing::single_turn_history;

Vocab small_vocab() {
  std::vector<std::string> texts = {"[UTT] I can't sleep. Tell me more. [SYS] [CUE] she looks tense"};
  return Vocab::build(texts);
}

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "ok";
}

// Scales another generator's logits by a positive constant.
class ScaledGenerator final : public Generator {
 public:
  ScaledGenerator(const Generator& inner, double scale) : inner_(inner), scale_(scale) {}
  const Vocab& vocab() const override { return inner_.vocab(); }
  std::unique_ptr<DecodeSession> start(std::span<const int> enc) const override {
    struct S final : DecodeSession {
      std::unique_ptr<DecodeSession> inner;
      double scale;
      std::vector<double> next_logits(std::span<const int> prefix) override {
        auto v = inner->next_logits(prefix);
        for (double& x : v) x *= scale;
        return v;
      }
    };
    auto s = std::make_unique<S>();
    s->inner = inner_.start(enc);
    s->scale = scale_;
    return s;
  }

 private:
  const Generator& inner_;
  double scale_;
};

// Never ranks <eos> first.
class ChattyGenerator final : public Generator {
 public:
  explicit ChattyGenerator(Vocab v) : vocab_(std::move(v)) {}
  const Vocab& vocab() const override { return vocab_; }
  std::unique_ptr<DecodeSession> start(std::span<const int>) const override {
    struct S final : DecodeSession {
      int n;
      std::vector<double> next_logits(std::span<const int>) override {
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[static_cast<std::size_t>(n - 1)] = 5.0;
        return v;
      }
    };
    auto s = std::make_unique<S>();
    s->n = vocab_.size();
    return s;
  }

 private:
  Vocab vocab_;
};

History random_history(std::mt19937_64& rng, const std::vector<std::string>& words) {
  History h;
  const int turns = 1 + static_cast<int>(rng() % 4);
  int index = 1;
  auto sentence = [&] {
    std::string s;
    for (std::size_t i = 0, n = 1 + rng() % 6; i < n; ++i) s += (i ? " " : "") + words[rng() % words.size()];
    return s;
  };
  for (int t = 0; t < turns; ++t) {
    if (t > 0) h.append_response(index++, ResponseRecord{sentence(), Emotion::kNeutral, Strategy::kApproval});
    h.append_context(index++, smes::testing::context(sentence(), rng() % 2 ? sentence() : ""));
  }
  return h;
}

TEST(Schema, DefaultsAreValid) {
  SegmentSchema s;
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(s.loss_policy, LossPolicy::kTargetsOnly);
}

TEST(Schema, RejectsDuplicateMarkersAndMissingResponse) {
  SegmentSchema s;
  s.markers[1] = s.markers[2];
  EXPECT_EQ(kind_of([&] { s.validate(); }), "invalid_schema");
  SegmentSchema r;
  r.include[index_of(Role::kResp)] = false;
  EXPECT_EQ(kind_of([&] { r.validate(); }), "invalid_schema");
}

TEST(Schema, Overrides) {
  SegmentSchema s;
  apply_schema_override(s, "loss=full_sequence");
  apply_schema_override(s, "include.STRAT=false");
  apply_schema_override(s, "cue=false");
  EXPECT_EQ(s.loss_policy, LossPolicy::kFullSequence);
  EXPECT_FALSE(s.includes(Role::kStrat));
  EXPECT_FALSE(s.composition.include_cue);
  EXPECT_EQ(kind_of([&] { apply_schema_override(s, "bogus"); }), "invalid_schema_override");
  EXPECT_EQ(kind_of([&] { apply_schema_override(s, "include.CUE=true"); }), "invalid_schema_override");
}

TEST(Schema, JsonRoundTrip) {
  SegmentSchema s = apply_ablation(SegmentSchema{}, "-strategy");
  s.loss_policy = LossPolicy::kFullSequence;
  EXPECT_EQ(segment_schema_from_json(to_json(s)), s);
}

TEST(Ablation, VariantsEditTheSchema) {
  const SegmentSchema base;
  EXPECT_EQ(apply_ablation(base, "baseline"), base);
  EXPECT_FALSE(apply_ablation(base, "-video").composition.include_cue);
  EXPECT_FALSE(apply_ablation(base, "-text").composition.include_utterance);
  EXPECT_FALSE(apply_ablation(base, "-emotion").includes(Role::kUsrEmo));
  EXPECT_FALSE(apply_ablation(base, "-strategy").includes(Role::kStrat));
  EXPECT_TRUE(apply_ablation(base, "-strategy").includes(Role::kResp));
}

TEST(Ablation, ResponseIsNotRemovable) {
  EXPECT_EQ(kind_of([] { apply_ablation(SegmentSchema{}, "-response"); }), "invalid_ablation");
  EXPECT_EQ(kind_of([] { apply_ablation(SegmentSchema{}, "-audio"); }), "unknown_variant");
}

TEST(Ablation, NoVideoContextsHaveNoCueMarker) {
  auto corpus = corpus::load_corpus(smes::testing::fixture("mini_train.jsonl").string());
  cues::MockCueBackend mock;
  const auto schema = apply_ablation(SegmentSchema{}, "-video");
  std::size_t contexts = 0;
  for (const auto& ex : build_examples(corpus, mock, schema)) {
    for (const auto& e : ex.history.entries()) {
      if (!e.is_context()) continue;
      ++contexts;
      EXPECT_EQ(e.context().rendered.find("[CUE]"), std::string::npos);
    }
  }
  EXPECT_GT(contexts, 0u);
  const auto base = build_examples(corpus, mock, SegmentSchema{});
  bool any_cue = false;
  for (const auto& ex : base) {
    for (const auto& e : ex.history.entries()) any_cue |= e.is_context() && e.context().rendered.find("[CUE]") == 0;
  }
  EXPECT_TRUE(any_cue);
}

TEST(History, Invariants) {
  History h;
  EXPECT_EQ(kind_of([&] { h.check_ready(); }), "empty_history");
  h.append_context(1, smes::testing::context("hi"));
  EXPECT_NO_THROW(h.check_ready());
  h.append_response(2, ResponseRecord{"hello", std::nullopt, std::nullopt});
  EXPECT_EQ(kind_of([&] { h.check_ready(); }), "history_not_ready");
  EXPECT_EQ(kind_of([&] { h.append_context(2, smes::testing::context("again")); }), "invalid_history");
  EXPECT_EQ(kind_of([&] { h.append_response(3, ResponseRecord{"  ", std::nullopt, std::nullopt}); }),
            "empty_response");
}

TEST(Linearize, RoleOrderWithOneLabelTokenPerSpan) {
  const Vocab v = small_vocab();
  const auto seq = linearize(single_turn_history("I can't sleep."),
                             {Emotion::kDepression, Strategy::kOpenQuestions, Emotion::kNeutral, "Tell me more."},
                             SegmentSchema{}, v);
  ASSERT_EQ(seq.tokens.size(), seq.roles.size());
  ASSERT_EQ(seq.tokens.size(), seq.loss_mask.size());
  const auto spans = role_spans(seq.roles);
  ASSERT_EQ(spans.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(spans[i].role, kRoleOrder[i]);
  for (std::size_t i = 1; i <= 3; ++i) EXPECT_EQ(spans[i].end - spans[i].begin, 2u);  // marker + label
  EXPECT_EQ(seq.tokens[spans[1].begin + 1], v.user_emotion_token(Emotion::kDepression));
  EXPECT_EQ(seq.tokens[spans[2].begin + 1], v.strategy_token(Strategy::kOpenQuestions));
  EXPECT_EQ(seq.tokens[spans[3].begin + 1], v.system_emotion_token(Emotion::kNeutral));
  EXPECT_EQ(seq.tokens.back(), Vocab::kEos);
  EXPECT_EQ(v.decode_text(std::span(seq.tokens).subspan(spans[4].begin + 1)), "Tell me more.");
}

TEST(Linearize, TargetsOnlyMasksHistory) {
  const Vocab v = small_vocab();
  const auto seq = linearize(single_turn_history("I can't sleep.", "she looks tense"),
                             {Emotion::kDepression, Strategy::kOpenQuestions, Emotion::kNeutral, "Tell me more."},
                             SegmentSchema{}, v);
  for (std::size_t i = 0; i < seq.size(); ++i) EXPECT_EQ(seq.loss_mask[i] == 1, seq.roles[i] != Role::kHist);
  SegmentSchema full;
  full.loss_policy = LossPolicy::kFullSequence;
  const auto all = linearize(single_turn_history("I can't sleep."), {}, full, v);
  for (auto m : all.loss_mask) EXPECT_EQ(m, 1);
}

TEST(Linearize, NoEmotionMeansNoUserEmotionTokens) {
  auto corpus = corpus::load_corpus(smes::testing::fixture("mini_train.jsonl").string());
  cues::MockCueBackend mock;
  const auto schema = apply_ablation(SegmentSchema{}, "-emotion");
  const auto examples = build_examples(corpus, mock, schema);
  const Vocab v = Vocab::build(example_texts(examples));
  for (const auto& ex : examples) {
    const auto seq = linearize(ex.history, ex.gold, schema, v);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      EXPECT_NE(seq.roles[i], Role::kUsrEmo);
      EXPECT_FALSE(v.user_emotion_of(seq.tokens[i]));
      EXPECT_NE(seq.tokens[i], v.role_marker(Role::kUsrEmo));
    }
  }
}

TEST(Linearize, HistoryBudgetDropsOldestFirst) {
  const Vocab v = small_vocab();
  History h;
  h.append_context(1, smes::testing::context("I can't sleep. I can't sleep."));
  h.append_response(2, ResponseRecord{"Tell me more.", std::nullopt, std::nullopt});
  h.append_context(3, smes::testing::context("she looks tense"));
  const auto full = encode_history(h, SegmentSchema{}, v, 0);
  const auto cut = encode_history(h, SegmentSchema{}, v, 10);
  EXPECT_LT(cut.size(), full.size());
  EXPECT_TRUE(std::equal(cut.begin() + 1, cut.end(), full.end() - static_cast<long>(cut.size() - 1)));
  const auto tiny = encode_history(h, SegmentSchema{}, v, 1);
  EXPECT_EQ(tiny.size(), 1 + v.encode_text(h.entries().back().context().rendered).size());
}

TEST(Linearize, MarkersMustBeAtomic) {
  SegmentSchema s;
  s.markers[0] = "HIST:";
  EXPECT_EQ(kind_of([&] { linearize(single_turn_history("x"), {}, s, small_vocab()); }), "marker_not_atomic");
}

TEST(Generate, RiggedStubGivesScriptedOutput) {
  model::ScriptedGenerator gen({{Emotion::kNeutral, Strategy::kOpenQuestions, Emotion::kNeutral, "Tell me more.",
                                 {}, {}, {}, 4.0}});
  const auto out = sequential_generate(gen, single_turn_history("I can't sleep."), SegmentSchema{});
  EXPECT_EQ(out.user_emotion, Emotion::kNeutral);
  EXPECT_EQ(out.strategy, Strategy::kOpenQuestions);
  EXPECT_EQ(out.system_emotion, Emotion::kNeutral);
  EXPECT_EQ(out.response, "Tell me more.");
  EXPECT_FALSE(out.truncated);
  EXPECT_NO_THROW(check_invariants(out));
  const double p = std::exp(4.0) / (std::exp(4.0) + 6.0);
  EXPECT_NEAR(out.stage_scores.user_emotion.at("neutral"), p, 1e-12);
  EXPECT_NEAR(out.stage_scores.strategy.at("open_questions"), std::exp(4.0) / (std::exp(4.0) + 9.0), 1e-12);
}

TEST(Generate, TiesBreakByCanonicalOrder) {
  model::ScriptedTurn flat{Emotion::kFear, Strategy::kOthers, Emotion::kJoy, "ok", {}, {}, {}, 0.0};
  model::ScriptedGenerator gen({flat});
  const auto out = sequential_generate(gen, single_turn_history("x"), SegmentSchema{});
  EXPECT_EQ(out.user_emotion, Emotion::kAnger);
  EXPECT_EQ(out.strategy, Strategy::kOpenQuestions);
  EXPECT_EQ(out.system_emotion, Emotion::kAnger);
  for (const auto& [k, p] : out.stage_scores.user_emotion) EXPECT_NEAR(p, 1.0 / 7.0, 1e-12);
}

TEST(Generate, ExplicitScriptedDistributions) {
  model::ScriptedTurn t{Emotion::kNeutral, Strategy::kOpenQuestions, Emotion::kNeutral, "fine", {}, {}, {}, 4.0};
  t.user_emotion_logits = {0, 1, 2, 3, 4, 5, 6};
  model::ScriptedGenerator gen({t});
  const auto out = sequential_generate(gen, single_turn_history("x"), SegmentSchema{});
  EXPECT_EQ(out.user_emotion, Emotion::kFear);
  double z = 0.0;
  for (int i = 0; i < 7; ++i) z += std::exp(i);
  EXPECT_NEAR(out.stage_scores.user_emotion.at("joy"), std::exp(5.0) / z, 1e-12);
}

TEST(Generate, FirstTurnNeedsNoPriorResponse) {
  model::RandomGenerator gen(small_vocab(), 1);
  EXPECT_NO_THROW(check_invariants(sequential_generate(gen, single_turn_history("I can't sleep."), SegmentSchema{})));
}

TEST(Generate, EmptyHistoryIsAnError) {
  model::RandomGenerator gen(small_vocab(), 1);
  EXPECT_EQ(kind_of([&] { sequential_generate(gen, History{}, SegmentSchema{}); }), "empty_history");
}

TEST(Generate, ResponseCapFlagsTruncation) {
  ChattyGenerator gen(small_vocab());
  DecodeConfig dc;
  dc.max_response_tokens = 5;
  const auto out = sequential_generate(gen, single_turn_history("x"), SegmentSchema{}, dc);
  EXPECT_TRUE(out.truncated);
  EXPECT_EQ(out.response_tokens.size(), 5u);
}

TEST(Generate, SkippedStagesStillScored) {
  model::ScriptedGenerator gen({{Emotion::kJoy, Strategy::kApproval, Emotion::kJoy, "ok", {}, {}, {}, 4.0}});
  const auto schema = apply_ablation(SegmentSchema{}, "-strategy");
  GenerationTrace trace;
  const auto out = sequential_generate(gen, single_turn_history("x"), schema, {}, &trace);
  ASSERT_EQ(out.skipped_stages.size(), 1u);
  EXPECT_EQ(out.skipped_stages[0], Role::kStrat);
  EXPECT_TRUE(trace.output_span[1].empty());
  EXPECT_NO_THROW(check_invariants(out));
}

TEST(Generate, StageMonotonicity) {
  std::mt19937_64 rng(4);
  const Vocab v = small_vocab();
  const std::vector<std::string> words = {"I", "can't", "sleep.", "she", "looks", "tense", "zzz"};
  for (int trial = 0; trial < 200; ++trial) {
    model::RandomGenerator gen(v, rng());
    SegmentSchema schema = apply_ablation(SegmentSchema{}, kAllAblations[rng() % kAllAblations.size()]);
    GenerationTrace trace;
    sequential_generate(gen, random_history(rng, words), schema, {}, &trace);
    for (std::size_t i = 0; i + 1 < 4; ++i) {
      auto expect = trace.conditioning[i];
      expect.insert(expect.end(), trace.output_span[i].begin(), trace.output_span[i].end());
      EXPECT_EQ(trace.conditioning[i + 1], expect);
    }
  }
}

TEST(Generate, LabelStagesInvariantUnderPositiveRescaling) {
  std::mt19937_64 rng(8);
  const Vocab v = small_vocab();
  const std::vector<std::string> words = {"I", "sleep.", "tense", "more."};
  for (int trial = 0; trial < 200; ++trial) {
    model::RandomGenerator base(v, rng());
    const double scale = std::ldexp(1.0, static_cast<int>(rng() % 9) - 4) * (1.0 + static_cast<double>(rng() % 7));
    ScaledGenerator scaled(base, scale);
    const auto h = random_history(rng, words);
    const auto a = sequential_generate(base, h, SegmentSchema{});
    const auto b = sequential_generate(scaled, h, SegmentSchema{});
    EXPECT_EQ(a.user_emotion, b.user_emotion);
    EXPECT_EQ(a.strategy, b.strategy);
    EXPECT_EQ(a.system_emotion, b.system_emotion);
  }
}

TEST(Generate, RoleLevelRoundTrip) {
  std::mt19937_64 rng(13);
  const Vocab v = small_vocab();
  const std::vector<std::string> words = {"I", "can't", "sleep.", "Tell", "me", "more."};
  for (int trial = 0; trial < 200; ++trial) {
    model::RandomGenerator gen(v, rng());
    const SegmentSchema schema = apply_ablation(SegmentSchema{}, kAllAblations[rng() % kAllAblations.size()]);
    const History h = random_history(rng, words);
    GenerationTrace trace;
    const auto out = sequential_generate(gen, h, schema, {}, &trace);
    std::vector<int> generated = trace.encoder_input;
    for (const auto& span : trace.output_span) generated.insert(generated.end(), span.begin(), span.end());
    if (generated.back() != Vocab::kEos) generated.push_back(Vocab::kEos);
    const auto roles = parse_roles(generated, schema, v);
    ASSERT_TRUE(roles);
    const auto seq =
        linearize(h, {out.user_emotion, out.strategy, out.system_emotion, out.response}, schema, v);
    EXPECT_EQ(role_spans(*roles), role_spans(seq.roles));
  }
}

TEST(Generate, RandomStubsAlwaysYieldValidOutputs) {
  std::mt19937_64 rng(1000);
  const Vocab v = small_vocab();
  const std::vector<std::string> words = {"I", "can't", "sleep.", "she", "looks", "tense"};
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    model::RandomGenerator gen(v, rng(), 1.0 + static_cast<double>(rng() % 20));
    DecodeConfig dc;
    dc.max_response_tokens = 8;
    dc.mode = rng() % 2 ? DecodeMode::kSample : DecodeMode::kGreedy;
    dc.seed = rng();
    try {
      check_invariants(sequential_generate(gen, random_history(rng, words), SegmentSchema{}, dc));
    } catch (const Error&) {
      ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(Generate, SamplingIsSeedDeterministic) {
  model::RandomGenerator gen(small_vocab(), 77);
  DecodeConfig dc;
  dc.mode = DecodeMode::kSample;
  dc.seed = 5;
  const auto h = single_turn_history("I can't sleep.");
  EXPECT_EQ(sequential_generate(gen, h, SegmentSchema{}, dc), sequential_generate(gen, h, SegmentSchema{}, dc));
}

TEST(Generate, RestrictedSoftmaxSumsToOne) {
  std::vector<double> logits = {1000.0, -1000.0, 3.0, 0.5, -2.0};
  std::vector<int> cands = {0, 2, 3};
  const auto p = restricted_softmax(logits, cands);
  double s = 0.0;
  for (double x : p) s += x;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(p[0], 1.0, 1e-12);
}

TEST(PipelineOutput, JsonRoundTrip) {
  model::RandomGenerator gen(small_vocab(), 3);
  const auto out = sequential_generate(gen, single_turn_history("I can't sleep."), SegmentSchema{});
  const auto doc = to_json(out);
  for (const char* key : {"user_emotion", "strategy", "system_emotion", "response", "stage_scores"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  const auto back = pipeline_output_from_json(doc);
  EXPECT_EQ(back.user_emotion, out.user_emotion);
  EXPECT_EQ(back.strategy, out.strategy);
  EXPECT_EQ(back.system_emotion, out.system_emotion);
  EXPECT_EQ(back.response, out.response);
  EXPECT_EQ(back.stage_scores.strategy, out.stage_scores.strategy);
}

TEST(PipelineOutput, InvariantChecks) {
  PipelineOutput bad;
  bad.response = "";
  EXPECT_EQ(kind_of([&] { check_invariants(bad); }), "invalid_pipeline_output");
}

}  // namespace
}  // namespace smes::reasoning
