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

#include "smes/service/session.hpp"

#include <cstdio>
#include <random>

#include "smes/cues/context.hpp"
#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::service {

using reasoning::PipelineOutput;

SessionManager::SessionManager(std::shared_ptr<const reasoning::Generator> generator,
                               std::shared_ptr<const cues::CueBackend> cues, ManagerOptions options)
    : generator_(std::move(generator)), cues_(std::move(cues)), options_(std::move(options)) {
  options_.base_schema.validate();
  std::random_device rd;
  id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  if (!options_.transcript.empty()) {
    log_.open(options_.transcript, std::ios::app);
    if (!log_) throw Error("io_error", "cannot open transcript " + options_.transcript.string());
  }
}

std::string SessionManager::next_id() {
  std::uint64_t x = (++id_counter_) + id_salt_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x ^= x >> 31;
  char buf[24];
  std::snprintf(buf, sizeof(buf), "s%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string SessionManager::create_session(const SessionConfig& config) {
  if (!generator_) throw Error("no_model_loaded", "the server has no generator loaded");
  auto session = std::make_shared<Session>();
  session->info.schema = reasoning::apply_ablation(options_.base_schema, config.variant);
  for (const auto& o : config.schema_overrides) reasoning::apply_schema_override(session->info.schema, o);
  session->info.schema.validate();
  session->info.config = config;
  session->info.config.decode.history_budget = options_.history_budget;
  session->info.created_at = std::chrono::system_clock::now();

  std::lock_guard lock(sessions_mutex_);
  std::string id;
  do {
    id = next_id();
  } while (sessions_.count(id) != 0);
  session->info.id = id;
  sessions_.emplace(id, std::move(session));
  return id;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error("unknown_session", "no session with id '" + id + "'");
  return it->second;
}

PipelineOutput SessionManager::post_turn(const std::string& session_id, const TurnRequest& request) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  const auto& schema = session->info.schema;

  const bool has_text = !util::trim(request.utterance).empty();
  if (!has_text && (request.clips.empty() || schema.composition.include_utterance)) {
    throw Error("invalid_request", "utterance is empty");
  }

  cues::EmotionCue cue;
  if (schema.composition.include_cue && !request.clips.empty()) {
    if (!cues_) {
      if (options_.cue_failure == CueFailurePolicy::kFail) {
        throw Error("cue_backend_failure", "no cue backend configured");
      }
    } else {
      try {
        cue = cues::extract_cue(request.clips, *cues_, session->history.last_index() + 1);
      } catch (const Error& e) {
        if (options_.cue_failure == CueFailurePolicy::kFail) throw Error("cue_backend_failure", e.what());
        cue = cues::EmotionCue{};
      }
    }
  }

  reasoning::History next = session->history;
  const int ctx_index = next.last_index() + 1;
  cues::TurnContext context;
  try {
    context = cues::compose_turn_context(cue, request.utterance, schema.composition);
  } catch (const Error& e) {
    throw Error("invalid_request", e.what());
  }
  next.append_context(ctx_index, std::move(context));

  reasoning::DecodeConfig decode = session->info.config.decode;
  decode.seed += session->info.turns;
  PipelineOutput out = reasoning::sequential_generate(*generator_, next, schema, decode);
  next.append_response(ctx_index + 1, reasoning::ResponseRecord{out.response, out.system_emotion, out.strategy});

  session->history = std::move(next);
  ++session->info.turns;
  log_turn(session_id, request, out);
  return out;
}

void SessionManager::log_turn(const std::string& id, const TurnRequest& request, const PipelineOutput& output) {
  if (!log_.is_open()) return;
  std::lock_guard lock(log_mutex_);
  log_ << nlohmann::json{{"output", reasoning::to_json(output)}, {"request", to_json(request)}, {"session", id}}.dump()
       << '\n';
  log_.flush();
}

reasoning::History SessionManager::history(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->history;
}

SessionInfo SessionManager::info(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->info;
}

std::size_t SessionManager::session_count() const {
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

TurnRequest turn_request_from_json(const nlohmann::json& doc) {
  TurnRequest r;
  try {
    if (!doc.is_object()) throw Error("invalid_request", "turn request must be an object");
    for (const auto& [key, _] : doc.items()) {
      if (key != "utterance" && key != "clips") throw Error("invalid_request", "unknown field '" + key + "'");
    }
    r.utterance = doc.value("utterance", std::string{});
    if (doc.contains("clips")) {
      for (const auto& c : doc.at("clips")) {
        corpus::ClipRef clip;
        clip.media_id = c.at("media_id").get<std::string>();
        clip.start_s = c.at("start_s").get<double>();
        clip.end_s = c.at("end_s").get<double>();
        const auto kind = corpus::parse_clip_kind(c.at("kind").get<std::string>());
        if (!kind) throw Error("invalid_request", "unknown clip kind");
        clip.kind = *kind;
        if (!(clip.start_s >= 0.0 && clip.end_s > clip.start_s)) {
          throw Error("invalid_request", "clip times must satisfy 0 <= start_s < end_s");
        }
        r.clips.push_back(std::move(clip));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_request", std::string("malformed turn request: ") + e.what());
  }
  return r;
}

nlohmann::json to_json(const TurnRequest& request) {
  nlohmann::json clips = nlohmann::json::array();
  for (const auto& c : request.clips) {
    clips.push_back({{"end_s", c.end_s},
                     {"kind", std::string(corpus::to_string(c.kind))},
                     {"media_id", c.media_id},
                     {"start_s", c.start_s}});
  }
  return {{"clips", clips}, {"utterance", request.utterance}};
}

SessionConfig session_config_from_json(const nlohmann::json& doc) {
  SessionConfig c;
  if (doc.is_null()) return c;
  try {
    if (!doc.is_object()) throw Error("invalid_request", "session config must be an object");
    c.variant = doc.value("variant", std::string("baseline"));
    c.schema_overrides = doc.value("schema", std::vector<std::string>{});
    if (doc.contains("decode")) {
      const auto& d = doc.at("decode");
      const std::string mode = d.value("mode", std::string("greedy"));
      if (mode == "greedy") {
        c.decode.mode = reasoning::DecodeMode::kGreedy;
      } else if (mode == "sample") {
        c.decode.mode = reasoning::DecodeMode::kSample;
      } else {
        throw Error("invalid_request", "decode mode must be greedy or sample");
      }
      c.decode.temperature = d.value("temperature", c.decode.temperature);
      c.decode.seed = d.value("seed", c.decode.seed);
      c.decode.max_response_tokens = d.value("max_response_tokens", c.decode.max_response_tokens);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_request", std::string("malformed session config: ") + e.what());
  }
  return c;
}

nlohmann::json to_json(const reasoning::History& history) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : history.entries()) {
    if (e.is_context()) {
      const auto& c = e.context();
      out.push_back({{"cue", {{"backend", std::string(cues::to_string(c.cue.backend))}, {"text", c.cue.text}}},
                     {"index", e.index},
                     {"kind", "context"},
                     {"rendered", c.rendered},
                     {"utterance", c.utterance}});
    } else {
      const auto& r = e.response();
      out.push_back({{"emotion", r.emotion ? nlohmann::json(std::string(to_string(*r.emotion))) : nlohmann::json()},
                     {"index", e.index},
                     {"kind", "response"},
                     {"strategy", r.strategy ? nlohmann::json(std::string(to_string(*r.strategy))) : nlohmann::json()},
                     {"text", r.text}});
    }
  }
  return out;
}

}  // namespace smes::service
