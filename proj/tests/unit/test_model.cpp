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
#include <cstring>
#include <random>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "smes/corpus/io.hpp"
#include "smes/model/checkpoint.hpp"
#include "smes/model/generators.hpp"
#include "smes/model/gradcheck.hpp"
#include "smes/model/loss.hpp"
#include "smes/model/trainer.hpp"
#include "smes/reasoning/generate.hpp"
#include "test_support.hpp"

#include <httplib.h>

namespace smes::model {
namespace {

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "ok";
}

Mat row(std::initializer_list<double> values) {
  Mat m(1, static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) m(0, i++) = v;
  return m;
}

ModelConfig tiny_config() {
  ModelConfig c;
  c.d_model = 16;
  c.n_heads = 2;
  c.n_enc_layers = 1;
  c.n_dec_layers = 1;
  c.ff_dim = 32;
  c.context_len = 64;
  c.seed = 3;
  return c;
}

corpus::Corpus fixture_corpus() { return corpus::load_corpus(smes::testing::fixture("mini_train.jsonl").string()); }

corpus::Corpus first_dialogues(std::size_t n) {
  auto c = fixture_corpus();
  c.dialogues.resize(n);
  return c;
}

TEST(NllLoss, UniformLogitsGiveLogV) {
  Mat logits = Mat::Zero(3, 7);
  std::vector<int> targets = {0, 3, 6};
  std::vector<std::uint8_t> mask = {1, 1, 1};
  const auto l = nll_loss(logits, targets, mask);
  EXPECT_NEAR(l.mean, std::log(7.0), 1e-12);
  EXPECT_NEAR(l.sum, 3.0 * std::log(7.0), 1e-12);
  EXPECT_EQ(l.count, 3u);
}

TEST(NllLoss, OneHotLimitIsZero) {
  std::vector<int> t = {2};
  std::vector<std::uint8_t> m = {1};
  EXPECT_NEAR(nll_loss(row({0, 0, 800, 0}), t, m).mean, 0.0, 1e-12);
}

TEST(NllLoss, SmallNumericCase) {
  std::vector<int> t = {0};
  std::vector<std::uint8_t> m = {1};
  const double z = std::exp(2.0) + std::exp(1.0) + std::exp(0.0);
  const double oracle = -std::log(std::exp(2.0) / z);
  EXPECT_NEAR(nll_loss(row({2.0, 1.0, 0.0}), t, m).mean, oracle, 1e-12);
  EXPECT_NEAR(oracle, 0.40760596444437, 1e-12);
}

TEST(NllLoss, MaskSelectsPositions) {
  Mat logits(2, 3);
  logits << 2, 1, 0, 0, 0, 0;
  std::vector<int> t = {0, 1};
  std::vector<std::uint8_t> m = {0, 1};
  const auto l = nll_loss(logits, t, m);
  EXPECT_NEAR(l.mean, std::log(3.0), 1e-12);
  EXPECT_EQ(l.count, 1u);
}

TEST(NllLoss, Errors) {
  Mat logits = Mat::Zero(2, 3);
  std::vector<int> t = {0, 1};
  std::vector<std::uint8_t> none = {0, 0};
  EXPECT_EQ(kind_of([&] { nll_loss(logits, t, none); }), "empty_loss_mask");
  std::vector<std::uint8_t> short_mask = {1};
  EXPECT_EQ(kind_of([&] { nll_loss(logits, t, short_mask); }), "shape_mismatch");
}

TEST(NllLoss, NonNegativeAndGradientMatchesDifferences) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    Mat logits(4, 6);
    for (Eigen::Index i = 0; i < logits.size(); ++i) logits.data()[i] = n(rng);
    std::vector<int> t = {static_cast<int>(rng() % 6), static_cast<int>(rng() % 6), static_cast<int>(rng() % 6),
                          static_cast<int>(rng() % 6)};
    std::vector<std::uint8_t> m = {1, 0, 1, 1};
    const auto l = nll_loss(logits, t, m);
    EXPECT_GE(l.mean, 0.0);
    const Mat g = nll_loss_grad(logits, t, m, 1.0 / 3.0);
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
      Mat up = logits, down = logits;
      up.data()[i] += 1e-6;
      down.data()[i] -= 1e-6;
      const double fd = (nll_loss(up, t, m).mean - nll_loss(down, t, m).mean) / 2e-6;
      EXPECT_NEAR(g.data()[i], fd, 1e-7);
    }
  }
}

TEST(Softmax, RowsSumToOne) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 50.0);
  Mat logits(64, 33);
  for (Eigen::Index i = 0; i < logits.size(); ++i) logits.data()[i] = n(rng);
  const Mat p = softmax_rows(logits);
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-6);
    EXPECT_GE(p.row(r).minCoeff(), 0.0);
  }
}

TEST(Config, Validation) {
  ModelConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_heads = 3;
  EXPECT_EQ(kind_of([&] { c.validate(); }), "invalid_model_config");
  ModelConfig d;
  d.ff_dim = 0;
  EXPECT_EQ(kind_of([&] { d.validate(); }), "invalid_model_config");
  EXPECT_EQ(model_config_from_json(to_json(tiny_config())), tiny_config());
}

TEST(GradientCheck, BelowBound) {
  const auto r = gradient_check_detailed(gradient_check_config(), 50);
  EXPECT_LE(r.n_params, kGradientCheckMaxParams);
  EXPECT_EQ(r.n_samples, 50u);
  EXPECT_LT(r.max_relative_error, 1e-4);
}

TEST(GradientCheck, Deterministic) {
  EXPECT_EQ(gradient_check(gradient_check_config(), 20), gradient_check(gradient_check_config(), 20));
}

TEST(GradientCheck, RejectsLargeModels) {
  EXPECT_EQ(kind_of([] { gradient_check(ModelConfig{}, 5); }), "model_too_large");
}

TEST(Transformer, ParameterCountAndOrder) {
  Transformer t(tiny_config(), 40);
  std::size_t total = 0;
  std::vector<std::string> names;
  t.for_each_param([&](const Param& p) {
    total += static_cast<std::size_t>(p.size());
    names.push_back(p.name);
  });
  EXPECT_EQ(total, t.parameter_count());
  EXPECT_EQ(names.front(), "embedding");
  std::set<std::string> distinct(names.begin(), names.end());
  EXPECT_EQ(distinct.size(), names.size());
}

TEST(Transformer, DecodeIsCausal) {
  Transformer t(tiny_config(), 40);
  const std::vector<int> enc = {4, 20, 21};
  const std::vector<int> a = {2, 30, 31, 32}, b = {2, 30, 31, 39};
  const Mat memory = t.encode(enc);
  const Mat la = t.decode(memory, a), lb = t.decode(memory, b);
  for (Eigen::Index r = 0; r < 3; ++r) EXPECT_LT((la.row(r) - lb.row(r)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT((la.row(3) - lb.row(3)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Training, EmptyCorpusIsAnError) {
  cues::MockCueBackend mock;
  EXPECT_EQ(kind_of([&] { train(corpus::Corpus{}, mock, reasoning::SegmentSchema{}, tiny_config()); }),
            "empty_corpus");
}

TEST(Training, SameSeedGivesIdenticalLossCurves) {
  cues::MockCueBackend mock;
  TrainOptions opts;
  opts.optimizer.epochs = 3;
  const auto c = first_dialogues(3);
  const auto a = train(c, mock, reasoning::SegmentSchema{}, tiny_config(), opts);
  const auto b = train(c, mock, reasoning::SegmentSchema{}, tiny_config(), opts);
  ASSERT_EQ(a.loss_curve.size(), 3u);
  EXPECT_EQ(a.loss_curve, b.loss_curve);
  auto other = tiny_config();
  other.seed = 4;
  EXPECT_NE(train(c, mock, reasoning::SegmentSchema{}, other, opts).loss_curve, a.loss_curve);
}

TEST(Training, LossDecreasesOverFirstFiveEpochs) {
  cues::MockCueBackend mock;
  TrainOptions opts;
  opts.optimizer.epochs = 5;
  ModelConfig cfg;  // d_model 64, 2+2 layers
  const auto r = train(fixture_corpus(), mock, reasoning::SegmentSchema{}, cfg, opts);
  ASSERT_EQ(r.loss_curve.size(), 5u);
  for (std::size_t i = 1; i < r.loss_curve.size(); ++i) EXPECT_LT(r.loss_curve[i], r.loss_curve[i - 1]) << i;
  EXPECT_EQ(r.checkpoint.metadata.epochs, 5);
  EXPECT_EQ(r.checkpoint.metadata.loss_curve, r.loss_curve);
}

TEST(Training, EpochCallbackCanStopEarly) {
  cues::MockCueBackend mock;
  TrainOptions opts;
  opts.optimizer.epochs = 10;
  int seen = 0;
  opts.on_epoch = [&](int epoch, double, const Checkpoint&) {
    seen = epoch;
    return epoch < 2;
  };
  const auto r = train(first_dialogues(1), mock, reasoning::SegmentSchema{}, tiny_config(), opts);
  EXPECT_EQ(seen, 2);
  EXPECT_EQ(r.loss_curve.size(), 2u);
}

TEST(Training, DivergenceNamesTheBatch) {
  cues::MockCueBackend mock;
  TrainOptions opts;
  opts.optimizer.epochs = 3;
  opts.optimizer.lr = 1e300;
  opts.optimizer.batch_size = 1;
  try {
    train(first_dialogues(2), mock, reasoning::SegmentSchema{}, tiny_config(), opts);
    FAIL() << "did not diverge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "training_diverged");
    EXPECT_NE(std::string(e.what()).find("batch"), std::string::npos);
  }
}

TEST(Training, OptimizerValidation) {
  cues::MockCueBackend mock;
  TrainOptions opts;
  opts.optimizer.lr = 0.0;
  EXPECT_EQ(kind_of([&] { train(first_dialogues(1), mock, reasoning::SegmentSchema{}, tiny_config(), opts); }),
            "invalid_optimizer_config");
}

TEST(TeacherForcing, ShiftsTheSequence) {
  reasoning::TrainingSequence seq;
  seq.tokens = {4, 40, 5, 9, 8, 41, 3};
  seq.roles = {Role::kHist, Role::kHist, Role::kUsrEmo, Role::kUsrEmo, Role::kResp, Role::kResp, Role::kResp};
  seq.loss_mask = {0, 0, 1, 1, 1, 1, 1};
  const auto b = teacher_forced(seq);
  EXPECT_EQ(b.encoder_input, (std::vector<int>{4, 40}));
  EXPECT_EQ(b.decoder_input, (std::vector<int>{Vocab::kBos, 4, 40, 5, 9, 8, 41}));
  EXPECT_EQ(b.targets, seq.tokens);
  EXPECT_EQ(b.mask, seq.loss_mask);
}

struct Trained {
  TrainResult result;
  std::vector<reasoning::TurnExample> examples;
};

const Trained& trained_tiny() {
  static const Trained t = [] {
    cues::MockCueBackend mock;
    TrainOptions opts;
    opts.optimizer.epochs = 2;
    const auto c = first_dialogues(2);
    Trained out{train(c, mock, reasoning::SegmentSchema{}, tiny_config(), opts),
                reasoning::build_examples(c, mock, reasoning::SegmentSchema{})};
    return out;
  }();
  return t;
}

std::vector<reasoning::PipelineOutput> greedy_all(const reasoning::Generator& g, const Trained& t) {
  std::vector<reasoning::PipelineOutput> outs;
  reasoning::DecodeConfig dc;
  dc.max_response_tokens = 12;
  dc.history_budget = 64;
  for (const auto& ex : t.examples) outs.push_back(reasoning::sequential_generate(g, ex.history, reasoning::SegmentSchema{}, dc));
  return outs;
}

TEST(Checkpoint, RoundTripPreservesGreedyOutput) {
  const auto& t = trained_tiny();
  std::stringstream buf;
  save_checkpoint(t.result.checkpoint, buf);
  const auto loaded = load_checkpoint(buf, &t.result.checkpoint.vocab);
  EXPECT_EQ(loaded.config, t.result.checkpoint.config);
  EXPECT_EQ(loaded.metadata, t.result.checkpoint.metadata);
  EXPECT_EQ(loaded.schema, t.result.checkpoint.schema);
  EXPECT_EQ(loaded.vocab.digest(), t.result.checkpoint.vocab.digest());
  std::vector<const Param*> a, b;
  t.result.checkpoint.model->for_each_param([&](const Param& p) { a.push_back(&p); });
  loaded.model->for_each_param([&](const Param& p) { b.push_back(&p); });
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i]->value == b[i]->value) << a[i]->name;
  EXPECT_EQ(greedy_all(TransformerGenerator(t.result.checkpoint), t), greedy_all(TransformerGenerator(loaded), t));
}

TEST(Checkpoint, FileRoundTripAndLossCurveCsv) {
  const auto& t = trained_tiny();
  smes::testing::TempDir dir;
  save_checkpoint(t.result.checkpoint, dir.path() / "model.ckpt");
  auto gen = open_generator((dir.path() / "model.ckpt").string());
  EXPECT_EQ(gen->vocab().digest(), t.result.checkpoint.vocab.digest());
  std::ostringstream csv;
  write_loss_curve_csv(csv, {1.5, 0.25});
  EXPECT_EQ(csv.str(), "epoch,loss\n1,1.5\n2,0.25\n");
}

TEST(Checkpoint, WrongVocabularyIsRejected) {
  const auto& t = trained_tiny();
  std::stringstream buf;
  save_checkpoint(t.result.checkpoint, buf);
  std::vector<std::string> texts = {"entirely different words"};
  const Vocab other = Vocab::build(texts);
  EXPECT_EQ(kind_of([&] { load_checkpoint(buf, &other); }), "vocab_digest_mismatch");
}

std::string tamper_header(const std::string& bytes, const std::function<void(nlohmann::json&)>& edit) {
  std::uint64_t len = 0;
  std::memcpy(&len, bytes.data() + 12, 8);
  auto header = nlohmann::json::parse(bytes.substr(20, len));
  edit(header);
  const std::string text = header.dump();
  const std::uint64_t new_len = text.size();
  std::string out = bytes.substr(0, 12);
  out.append(reinterpret_cast<const char*>(&new_len), 8);
  return out + text + bytes.substr(20 + len);
}

TEST(Checkpoint, CorruptionIsDetected) {
  const auto& t = trained_tiny();
  std::stringstream buf;
  save_checkpoint(t.result.checkpoint, buf);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.substr(0, 8), "SMESCKPT");

  auto load = [](const std::string& b) {
    std::istringstream in(b);
    load_checkpoint(in);
  };
  EXPECT_EQ(kind_of([&] { load("NOTACKPT" + bytes.substr(8)); }), "checkpoint_format");
  EXPECT_EQ(kind_of([&] { load(bytes.substr(0, bytes.size() - 9)); }), "checkpoint_format");
  EXPECT_EQ(kind_of([&] { load(tamper_header(bytes, [](nlohmann::json& h) { h["config"]["ff_dim"] = 48; })); }),
            "checkpoint_shape_mismatch");
  EXPECT_EQ(kind_of([&] { load(tamper_header(bytes, [](nlohmann::json& h) { h["vocab"]["tokens"].push_back("zz"); })); }),
            "vocab_digest_mismatch");
  EXPECT_NO_THROW(load(tamper_header(bytes, [](nlohmann::json&) {})));
}

TEST(Generators, UniformAndRandomStubs) {
  std::vector<std::string> texts = {"a b c"};
  const Vocab v = Vocab::build(texts);
  UniformGenerator u(v);
  const std::vector<int> enc = {4};
  const std::vector<int> prefix = {2, 4};
  const auto lu = u.start(enc)->next_logits(prefix);
  ASSERT_EQ(static_cast<int>(lu.size()), v.size());
  for (double x : lu) EXPECT_EQ(x, lu[0]);
  RandomGenerator r1(v, 9), r2(v, 9), r3(v, 10);
  EXPECT_EQ(r1.start(enc)->next_logits(prefix), r2.start(enc)->next_logits(prefix));
  EXPECT_NE(r1.start(enc)->next_logits(prefix), r3.start(enc)->next_logits(prefix));
}

TEST(Generators, OpenGeneratorSources) {
  std::vector<std::string> texts = {"hello there"};
  EXPECT_EQ(open_generator("stub:uniform", texts)->vocab().size(), Vocab::kNumSpecials + 2);
  EXPECT_EQ(open_generator("stub:uniform:a,b,c")->vocab().size(), Vocab::kNumSpecials + 3);
  EXPECT_NE(open_generator("stub:random:5", texts), nullptr);
  EXPECT_EQ(kind_of([] { open_generator("carrier-pigeon"); }), "invalid_generator");

  smes::testing::TempDir dir;
  const auto path = dir.path() / "script.json";
  std::ofstream(path) << R"({"turns":[{"user_emotion":"fear","strategy":"approval","system_emotion":"joy","response":"You did well."}]})";
  auto scripted = open_generator("stub:script:" + path.string());
  const auto out = reasoning::sequential_generate(*scripted, smes::testing::single_turn_history("hi"), reasoning::SegmentSchema{});
  EXPECT_EQ(out.user_emotion, Emotion::kFear);
  EXPECT_EQ(out.strategy, Strategy::kApproval);
  EXPECT_EQ(out.system_emotion, Emotion::kJoy);
  EXPECT_EQ(out.response, "You did well.");
}

TEST(Generators, ScriptedCyclesThroughTurns) {
  ScriptedGenerator gen({{Emotion::kAnger, Strategy::kApproval, Emotion::kJoy, "one", {}, {}, {}, 4.0},
                         {Emotion::kFear, Strategy::kOthers, Emotion::kSadness, "two", {}, {}, {}, 4.0}});
  const auto h = smes::testing::single_turn_history("x");
  EXPECT_EQ(reasoning::sequential_generate(gen, h, reasoning::SegmentSchema{}).response, "one");
  EXPECT_EQ(reasoning::sequential_generate(gen, h, reasoning::SegmentSchema{}).response, "two");
  EXPECT_EQ(reasoning::sequential_generate(gen, h, reasoning::SegmentSchema{}).response, "one");
  gen.rewind();
  EXPECT_EQ(reasoning::sequential_generate(gen, h, reasoning::SegmentSchema{}).response, "one");
}

TEST(Generators, TransformerPrefixLogitsMatchStepwise) {
  const auto& t = trained_tiny();
  TransformerGenerator gen(t.result.checkpoint);
  const std::vector<int> enc = {4, 40, 41};
  const std::vector<int> seq = {2, 4, 40, 41, 5, 9, 8};
  auto s = gen.start(enc);
  const auto all = s->prefix_logits(seq, 3);
  ASSERT_EQ(all.size(), 4u);
  for (std::size_t i = 3; i < seq.size(); ++i) {
    const auto step = s->next_logits(std::span(seq).first(i + 1));
    for (std::size_t k = 0; k < step.size(); ++k) EXPECT_NEAR(all[i - 3][k], step[k], 1e-12);
  }
}

TEST(Generators, ExternalEndpoint) {
  std::vector<std::string> texts = {"calm down"};
  const Vocab v = Vocab::build(texts);
  httplib::Server server;
  server.Get("/gen/vocab", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json{{"tokens", v.tokens()}}.dump(), "application/json");
  });
  server.Post("/gen/logits", [&](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    std::vector<double> logits(static_cast<std::size_t>(v.size()), 0.0);
    const auto prefix = body.at("prefix").get<std::vector<int>>();
    if (prefix.back() == v.role_marker(Role::kUsrEmo)) logits[static_cast<std::size_t>(v.user_emotion_token(Emotion::kJoy))] = 5.0;
    if (prefix.back() == v.role_marker(Role::kResp)) logits[static_cast<std::size_t>(*v.find("calm"))] = 5.0;
    if (prefix.back() == *v.find("calm")) logits[Vocab::kEos] = 5.0;
    res.set_content(nlohmann::json{{"logits", logits}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  {
    auto gen = open_generator("http://127.0.0.1:" + std::to_string(port) + "/gen");
    EXPECT_EQ(gen->vocab().digest(), v.digest());
    const auto out = reasoning::sequential_generate(*gen, smes::testing::single_turn_history("calm"), reasoning::SegmentSchema{});
    EXPECT_EQ(out.user_emotion, Emotion::kJoy);
    EXPECT_EQ(out.response, "calm");
  }
  server.stop();
  th.join();
  EXPECT_EQ(kind_of([&] { open_generator("http://127.0.0.1:" + std::to_string(port) + "/gen"); }),
            "generator_transport_failure");
}

}  // namespace
}  // namespace smes::model
