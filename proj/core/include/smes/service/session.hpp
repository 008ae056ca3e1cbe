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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "smes/corpus/types.hpp"
#include "smes/cues/backend.hpp"
#include "smes/reasoning/generate.hpp"
#include "smes/reasoning/history.hpp"
#include "smes/reasoning/schema.hpp"

namespace smes::service {

enum class CueFailurePolicy : std::uint8_t { kProceed, kFail };

struct SessionConfig {
  std::string variant = "baseline";
  std::vector<std::string> schema_overrides;  // KEY=VAL, applied after the variant
  reasoning::DecodeConfig decode;  // history_budget comes from ManagerOptions
};

struct TurnRequest {
  std::string utterance;
  std::vector<corpus::ClipRef> clips;
};

struct SessionInfo {
  std::string id;
  std::chrono::system_clock::time_point created_at;
  SessionConfig config;
  reasoning::SegmentSchema schema;
  std::size_t turns = 0;
};

struct ManagerOptions {
  reasoning::SegmentSchema base_schema;
  CueFailurePolicy cue_failure = CueFailurePolicy::kProceed;
  std::filesystem::path transcript;  // append-only JSON lines; empty disables
  std::size_t history_budget = 256;  // default for new sessions
};

// In-memory sessions over one shared, read-only generator. Turns on one
// session are serialized; different sessions proceed concurrently.
class SessionManager {
 public:
  SessionManager(std::shared_ptr<const reasoning::Generator> generator, std::shared_ptr<const cues::CueBackend> cues,
                 ManagerOptions options = {});

  // Throws smes::Error("no_model_loaded", "unknown_variant", ...).
  std::string create_session(const SessionConfig& config = {});

  // Throws smes::Error("unknown_session", "invalid_request",
  // "cue_backend_failure", ...). The history is unchanged on failure.
  reasoning::PipelineOutput post_turn(const std::string& session_id, const TurnRequest& request);

  reasoning::History history(const std::string& session_id) const;
  SessionInfo info(const std::string& session_id) const;
  std::size_t session_count() const;
  bool has_generator() const { return generator_ != nullptr; }

 private:
  struct Session {
    SessionInfo info;
    reasoning::History history;
    mutable std::mutex mutex;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string next_id();
  void log_turn(const std::string& id, const TurnRequest& request, const reasoning::PipelineOutput& output);

  std::shared_ptr<const reasoning::Generator> generator_;
  std::shared_ptr<const cues::CueBackend> cues_;
  ManagerOptions options_;

  mutable std::mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t id_counter_ = 0;
  std::uint64_t id_salt_;

  std::mutex log_mutex_;
  std::ofstream log_;
};

// Wire records shared by the server, the CLI and tests.
TurnRequest turn_request_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const TurnRequest& request);
SessionConfig session_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const reasoning::History& history);

}  // namespace smes::service
