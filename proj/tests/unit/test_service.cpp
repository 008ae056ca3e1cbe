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


#include <fstream>
#include <random>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "smes/model/generators.hpp"
#include "smes/service/server.hpp"
#include "smes/service/session.hpp"
#include "test_support.hpp"

#include <httplib.h>

namespace smes::service {
namespace {

using reasoning::PipelineOutput;

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "ok";
}

class FailingCueBackend final : public cues::CueBackend {
 public:
  cues::BackendKind kind() const override { return cues::BackendKind::kExternal; }
  std::string answer(const cues::CuePrompt&) const override {
    throw cues::CueError("cue_transport_failure", kind(), "backend offline");
  }
};

std::shared_ptr<model::ScriptedGenerator> scripted() {
  return std::make_shared<model::ScriptedGenerator>(std::vector<model::ScriptedTurn>{
      {Emotion::kDepression, Strategy::kOpenQuestions, Emotion::kNeutral, "What keeps you awake?", {}, {}, {}, 4.0},
      {Emotion::kSadness, Strategy::kRestatement, Emotion::kSadness, "That sounds lonely.", {}, {}, {}, 4.0}});
}

std::shared_ptr<model::RandomGenerator> random_gen(std::uint64_t seed) {
  std::vector<std::string> words = {"I", "can't", "sleep.", "Tell", "me", "more.", "work", "tired"};
  return std::make_shared<model::RandomGenerator>(model::Vocab::build(words), seed);
}

const std::vector<corpus::ClipRef> kClips = {{"c1", 3.0, 4.0, corpus::ClipKind::kVideo}};

TEST(Sessions, NewSessionIsEmpty) {
  SessionManager mgr(scripted(), std::make_shared<cues::MockCueBackend>());
  const auto id = mgr.create_session();
  EXPECT_EQ(mgr.history(id).size(), 0u);
  EXPECT_EQ(mgr.info(id).turns, 0u);
  EXPECT_EQ(mgr.info(id).config.variant, "baseline");
}

TEST(Sessions, IdsAreDistinct) {
  SessionManager mgr(scripted(), nullptr);
  std::set<std::string> ids;
  for (int i = 0; i < 500; ++i) ids.insert(mgr.create_session());
  EXPECT_EQ(ids.size(), 500u);
  EXPECT_EQ(mgr.session_count(), 500u);
}

TEST(Sessions, CreationErrors) {
  SessionManager mgr(scripted(), nullptr);
  SessionConfig bad;
  bad.variant = "-audio";
  EXPECT_EQ(kind_of([&] { mgr.create_session(bad); }), "unknown_variant");
  SessionManager empty(nullptr, nullptr);
  EXPECT_FALSE(empty.has_generator());
  EXPECT_EQ(kind_of([&] { empty.create_session(); }), "no_model_loaded");
}

TEST(Sessions, VariantShapesTheSchema) {
  SessionManager mgr(scripted(), nullptr);
  SessionConfig cfg;
  cfg.variant = "-strategy";
  cfg.schema_overrides = {"loss=full_sequence"};
  const auto info = mgr.info(mgr.create_session(cfg));
  EXPECT_FALSE(info.schema.includes(Role::kStrat));
  EXPECT_EQ(info.schema.loss_policy, reasoning::LossPolicy::kFullSequence);
}

TEST(PostTurn, FirstTurnGivesScriptedOutput) {
  SessionManager mgr(scripted(), std::make_shared<cues::MockCueBackend>());
  const auto id = mgr.create_session();
  const auto out = mgr.post_turn(id, {"I can't sleep.", kClips});
  EXPECT_EQ(out.user_emotion, Emotion::kDepression);
  EXPECT_EQ(out.strategy, Strategy::kOpenQuestions);
  EXPECT_EQ(out.system_emotion, Emotion::kNeutral);
  EXPECT_EQ(out.response, "What keeps you awake?");
  EXPECT_EQ(out.stage_scores.user_emotion.size(), kNumEmotions);
  const auto h = mgr.history(id);
  ASSERT_EQ(h.size(), 2u);
  ASSERT_TRUE(h.entries()[0].is_context());
  EXPECT_EQ(h.entries()[0].context().cue.text, "[mock cue for c1@3.0]");
  EXPECT_EQ(h.entries()[0].context().rendered, "[CUE] [[mock cue for c1@3.0] [UTT] I can't sleep.");
  EXPECT_EQ(h.entries()[1].response().text, out.response);
  EXPECT_EQ(h.entries()[1].response().strategy, Strategy::kOpenQuestions);
}

TEST(PostTurn, HistoryGrowsByTwo) {
  SessionManager mgr(random_gen(1), std::make_shared<cues::MockCueBackend>());
  const auto id = mgr.create_session();
  for (std::size_t t = 1; t <= 6; ++t) {
    mgr.post_turn(id, {"turn " + std::to_string(t), t % 2 ? kClips : std::vector<corpus::ClipRef>{}});
    EXPECT_EQ(mgr.history(id).size(), 2 * t);
    EXPECT_EQ(mgr.info(id).turns, t);
  }
}

TEST(PostTurn, UnknownSession) {
  SessionManager mgr(scripted(), nullptr);
  EXPECT_EQ(kind_of([&] { mgr.post_turn("s0000000000000000", {"hi", {}}); }), "unknown_session");
  EXPECT_EQ(kind_of([&] { mgr.history("nope"); }), "unknown_session");
}

TEST(PostTurn, InvalidRequestLeavesHistoryUnchanged) {
  SessionManager mgr(scripted(), nullptr);
  const auto id = mgr.create_session();
  EXPECT_EQ(kind_of([&] { mgr.post_turn(id, {"   ", {}}); }), "invalid_request");
  EXPECT_EQ(mgr.history(id).size(), 0u);
}

TEST(PostTurn, CueOutageProceedsWithoutCue) {
  SessionManager mgr(scripted(), std::make_shared<FailingCueBackend>());
  const auto id = mgr.create_session();
  const auto out = mgr.post_turn(id, {"I can't sleep.", kClips});
  EXPECT_EQ(out.response, "What keeps you awake?");
  const auto h = mgr.history(id);
  const auto& ctx = h.entries()[0].context();
  EXPECT_EQ(ctx.cue.backend, cues::BackendKind::kNone);
  EXPECT_EQ(ctx.cue.text, "");
  EXPECT_EQ(ctx.rendered, "[UTT] I can't sleep.");
}

TEST(PostTurn, CueOutageFailsUnderFailPolicy) {
  ManagerOptions opts;
  opts.cue_failure = CueFailurePolicy::kFail;
  SessionManager mgr(scripted(), std::make_shared<FailingCueBackend>(), opts);
  const auto id = mgr.create_session();
  EXPECT_EQ(kind_of([&] { mgr.post_turn(id, {"I can't sleep.", kClips}); }), "cue_backend_failure");
  EXPECT_EQ(mgr.history(id).size(), 0u);
}

TEST(PostTurn, TextAblationAcceptsClipOnlyTurns) {
  SessionManager mgr(scripted(), std::make_shared<cues::MockCueBackend>());
  SessionConfig cfg;
  cfg.variant = "-text";
  const auto id = mgr.create_session(cfg);
  mgr.post_turn(id, {"", kClips});
  EXPECT_EQ(mgr.history(id).entries()[0].context().rendered, "[CUE] [[mock cue for c1@3.0]");
}

TEST(Isolation, InterleavedSessionsNeverShareEntries) {
  SessionManager mgr(random_gen(2), std::make_shared<cues::MockCueBackend>());
  std::mt19937_64 rng(12);
  std::vector<std::string> ids;
  std::map<std::string, std::vector<std::string>> sent;
  for (int i = 0; i < 6; ++i) ids.push_back(mgr.create_session());
  for (int step = 0; step < 300; ++step) {
    const auto& id = ids[rng() % ids.size()];
    const std::string utt = id + " says " + std::to_string(step);
    mgr.post_turn(id, {utt, {}});
    sent[id].push_back(utt);
  }
  for (const auto& id : ids) {
    const auto h = mgr.history(id);
    ASSERT_EQ(h.size(), 2 * sent[id].size());
    for (std::size_t i = 0; i < sent[id].size(); ++i) EXPECT_EQ(h.entries()[2 * i].context().utterance, sent[id][i]);
  }
}

TEST(Isolation, ConcurrentSessions) {
  SessionManager mgr(random_gen(3), std::make_shared<cues::MockCueBackend>());
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(mgr.create_session());
  std::vector<std::thread> pool;
  for (int w = 0; w < 8; ++w) {
    pool.emplace_back([&, w] {
      for (int k = 0; k < 25; ++k) mgr.post_turn(ids[static_cast<std::size_t>(w % 4)], {ids[static_cast<std::size_t>(w % 4)], {}});
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& id : ids) {
    const auto h = mgr.history(id);
    EXPECT_EQ(h.size(), 100u);
    for (const auto& e : h.entries()) {
      if (e.is_context()) {
        EXPECT_EQ(e.context().utterance, id);
      }
    }
  }
}

std::vector<TurnRequest> five_turns() {
  return {{"I can't sleep.", kClips},
          {"Work is crushing me.", {}},
          {"My manager never listens.", {{"c1", 9.0, 11.0, corpus::ClipKind::kAudio}}},
          {"I feel alone.", {}},
          {"Maybe I should talk to someone.", {}}};
}

TEST(Replay, TranscriptReproducesOutputs) {
  smes::testing::TempDir dir;
  const auto log = dir.path() / "transcript.jsonl";
  std::vector<PipelineOutput> first;
  {
    ManagerOptions opts;
    opts.transcript = log;
    SessionManager mgr(random_gen(42), std::make_shared<cues::MockCueBackend>(), opts);
    const auto id = mgr.create_session();
    for (const auto& r : five_turns()) first.push_back(mgr.post_turn(id, r));
  }
  std::ifstream in(log);
  std::vector<TurnRequest> requests;
  std::vector<nlohmann::json> logged;
  for (std::string line; std::getline(in, line);) {
    const auto rec = nlohmann::json::parse(line);
    requests.push_back(turn_request_from_json(rec.at("request")));
    logged.push_back(rec.at("output"));
  }
  ASSERT_EQ(requests.size(), 5u);
  SessionManager mgr(random_gen(42), std::make_shared<cues::MockCueBackend>());
  const auto id = mgr.create_session();
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto out = mgr.post_turn(id, requests[i]);
    EXPECT_EQ(out, first[i]) << i;
    EXPECT_EQ(reasoning::to_json(out), logged[i]) << i;
  }
}

TEST(Replay, ScriptedSessionReplays) {
  auto gen = scripted();
  auto run = [&] {
    gen->rewind();
    SessionManager mgr(gen, std::make_shared<cues::MockCueBackend>());
    const auto id = mgr.create_session();
    std::vector<PipelineOutput> outs;
    for (const auto& r : five_turns()) outs.push_back(mgr.post_turn(id, r));
    return outs;
  };
  const auto a = run(), b = run();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[1].response, "That sounds lonely.");
}

TEST(Wire, TurnRequestRoundTrip) {
  const TurnRequest r{"hello", kClips};
  const auto back = turn_request_from_json(to_json(r));
  EXPECT_EQ(back.utterance, r.utterance);
  EXPECT_EQ(back.clips, r.clips);
  EXPECT_EQ(kind_of([] { turn_request_from_json(nlohmann::json{{"text", "x"}}); }), "invalid_request");
  EXPECT_EQ(kind_of([] { turn_request_from_json(nlohmann::json::parse(R"({"utterance":"x","clips":[{"media_id":"m","start_s":2,"end_s":1,"kind":"video"}]})")); }),
            "invalid_request");
}

TEST(Wire, SessionConfig) {
  const auto c = session_config_from_json(
      nlohmann::json::parse(R"({"variant":"-video","schema":["loss=full_sequence"],"decode":{"mode":"sample","seed":9}})"));
  EXPECT_EQ(c.variant, "-video");
  EXPECT_EQ(c.schema_overrides.size(), 1u);
  EXPECT_EQ(c.decode.mode, reasoning::DecodeMode::kSample);
  EXPECT_EQ(c.decode.seed, 9u);
  EXPECT_EQ(kind_of([] { session_config_from_json(nlohmann::json{{"decode", {{"mode", "beam"}}}}); }),
            "invalid_request");
}

TEST(Wire, StatusMapping) {
  EXPECT_EQ(status_for("unknown_session"), 404);
  EXPECT_EQ(status_for("invalid_request"), 400);
  EXPECT_EQ(status_for("unknown_variant"), 400);
  EXPECT_EQ(status_for("no_model_loaded"), 500);
}

class LiveServer {
 public:
  explicit LiveServer(SessionManager& mgr) : server_(mgr) {
    port_ = server_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_.serve(); });
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(10, 0);
    return c;
  }
  int port() const { return port_; }

 private:
  ApiServer server_;
  int port_ = -1;
  std::thread thread_;
};

TEST(Http, EndToEnd) {
  SessionManager mgr(scripted(), std::make_shared<cues::MockCueBackend>());
  LiveServer live(mgr);
  ASSERT_GT(live.port(), 0);
  auto c = live.client();

  auto health = c.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(nlohmann::json::parse(health->body)["model_loaded"], true);

  auto created = c.Post("/sessions", "{}", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = nlohmann::json::parse(created->body).at("id");

  auto turn = c.Post("/sessions/" + id + "/turns",
                     R"({"utterance":"I can't sleep.","clips":[{"media_id":"c1","start_s":3.0,"end_s":4.0,"kind":"video"}]})",
                     "application/json");
  ASSERT_TRUE(turn);
  EXPECT_EQ(turn->status, 200);
  const auto out = nlohmann::json::parse(turn->body);
  EXPECT_EQ(out["user_emotion"], "depression");
  EXPECT_EQ(out["strategy"], "open_questions");
  EXPECT_EQ(out["system_emotion"], "neutral");
  EXPECT_EQ(out["response"], "What keeps you awake?");
  EXPECT_EQ(out["stage_scores"]["strategy"].size(), kNumStrategies);

  auto hist = c.Get("/sessions/" + id + "/history");
  ASSERT_TRUE(hist);
  const auto h = nlohmann::json::parse(hist->body);
  EXPECT_EQ(h["id"], id);
  ASSERT_EQ(h["entries"].size(), 2u);
  EXPECT_EQ(h["entries"][0]["kind"], "context");
  EXPECT_EQ(h["entries"][0]["cue"]["backend"], "mock");
  EXPECT_EQ(h["entries"][1]["kind"], "response");
  EXPECT_EQ(h["entries"][1]["text"], "What keeps you awake?");
  EXPECT_EQ(h["entries"], to_json(mgr.history(id)));
}

TEST(Http, Errors) {
  SessionManager mgr(scripted(), nullptr);
  LiveServer live(mgr);
  auto c = live.client();
  auto missing = c.Post("/sessions/s0/turns", R"({"utterance":"hi"})", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(nlohmann::json::parse(missing->body)["error"]["kind"], "unknown_session");

  const std::string id = nlohmann::json::parse(c.Post("/sessions", "", "application/json")->body).at("id");
  auto malformed = c.Post("/sessions/" + id + "/turns", "{not json", "application/json");
  ASSERT_TRUE(malformed);
  EXPECT_EQ(malformed->status, 400);
  auto bad_variant = c.Post("/sessions", R"({"variant":"-audio"})", "application/json");
  ASSERT_TRUE(bad_variant);
  EXPECT_EQ(bad_variant->status, 400);
  EXPECT_EQ(nlohmann::json::parse(bad_variant->body)["error"]["kind"], "unknown_variant");
  EXPECT_EQ(mgr.history(id).size(), 0u);
}

TEST(Http, NoModelLoaded) {
  SessionManager mgr(nullptr, nullptr);
  LiveServer live(mgr);
  auto c = live.client();
  EXPECT_EQ(nlohmann::json::parse(c.Get("/healthz")->body)["model_loaded"], false);
  auto created = c.Post("/sessions", "{}", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 500);
}

}  // namespace
}  // namespace smes::service
