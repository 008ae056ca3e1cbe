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

#include "smes/cues/backend.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "smes/util/util.hpp"

namespace smes::cues {

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kExternal: return "external";
    case BackendKind::kCached: return "cached";
    case BackendKind::kMock: return "mock";
    case BackendKind::kNone: return "none";
  }
  return "none";
}

CueError::CueError(std::string kind, BackendKind backend, const std::string& message)
    : Error(std::move(kind), "[" + std::string(to_string(backend)) + " cue backend] " + message),
      backend_(backend) {}

std::string MockCueBackend::answer(const CuePrompt& prompt) const {
  if (prompt.clips.empty()) throw CueError("empty_clip_set", kind(), "no clips");
  const auto& c = prompt.clips.front();
  return "[mock cue for " + c.media_id + "@" + util::format_seconds(c.start_s) + "]";
}

std::string encode_cue_request(const CuePrompt& prompt) {
  nlohmann::json media = nlohmann::json::array();
  for (const auto& c : prompt.clips) {
    media.push_back({{"media_id", c.media_id},
                     {"start_s", c.start_s},
                     {"end_s", c.end_s},
                     {"kind", corpus::to_string(c.kind)}});
  }
  nlohmann::json body = {{"questions", {prompt.question_1, prompt.question_2}}, {"media", std::move(media)}};
  return body.dump();
}

ExternalCueBackend::ExternalCueBackend(ExternalCueConfig config) : config_(std::move(config)) {
  const auto scheme = config_.url.find("://");
  if (scheme == std::string::npos) {
    throw CueError("invalid_cue_config", kind(), "cue backend URL needs a scheme: '" + config_.url + "'");
  }
  const auto slash = config_.url.find('/', scheme + 3);
  base_ = config_.url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : config_.url.substr(slash);
  if (config_.retries < 0) throw CueError("invalid_cue_config", kind(), "retries must be >= 0");
}

std::string ExternalCueBackend::answer(const CuePrompt& prompt) const {
  httplib::Client client(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const std::string body = encode_cue_request(prompt);
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw CueError("cue_bad_response", kind(), std::string("unparseable response: ") + e.what());
    }
    if (reply.contains("answer") && reply["answer"].is_string()) return reply["answer"].get<std::string>();
    if (reply.contains("answers") && reply["answers"].is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < reply["answers"].size(); ++i) {
        if (i > 0) joined += config_.answer_separator;
        joined += reply["answers"][i].get<std::string>();
      }
      return joined;
    }
    throw CueError("cue_bad_response", kind(), "response has neither 'answer' nor 'answers'");
  }
  throw CueError("cue_transport_failure", kind(), last_error + " (" + config_.url + ")");
}

CachedCueBackend::CachedCueBackend(std::filesystem::path dir, bool strict,
                                   std::shared_ptr<const CueBackend> fallback)
    : dir_(std::move(dir)), strict_(strict), fallback_(std::move(fallback)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw CueError("cue_cache_io", kind(), "cannot create cache directory " + dir_.string());
}

std::string CachedCueBackend::cache_key(const CuePrompt& prompt) {
  std::ostringstream os;
  for (const auto& c : prompt.clips) {
    os << c.media_id << '\x1f' << util::format_seconds(c.start_s) << '\x1f' << util::format_seconds(c.end_s)
       << '\x1f' << corpus::to_string(c.kind) << '\x1e';
  }
  os << prompt_hash(prompt);
  return util::sha256_hex(os.str());
}

std::optional<std::string> CachedCueBackend::lookup(const CuePrompt& prompt) const {
  std::ifstream in(dir_ / cache_key(prompt), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void CachedCueBackend::prime(const CuePrompt& prompt, std::string_view answer) const {
  static std::atomic<std::uint64_t> counter{0};
  const auto key = cache_key(prompt);
  std::ostringstream tmp_name;
  tmp_name << key << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.'
           << counter.fetch_add(1);
  const auto tmp = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CueError("cue_cache_io", kind(), "cannot write " + tmp.string());
    out.write(answer.data(), static_cast<std::streamsize>(answer.size()));
    if (!out) throw CueError("cue_cache_io", kind(), "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dir_ / key, ec);
  if (ec) throw CueError("cue_cache_io", kind(), "cannot rename into " + (dir_ / key).string());
}

std::string CachedCueBackend::answer(const CuePrompt& prompt) const {
  if (auto hit = lookup(prompt)) return *hit;
  if (strict_ || !fallback_) {
    throw CueError("cue_cache_miss", kind(), "cache miss for key " + cache_key(prompt));
  }
  std::string fresh = fallback_->answer(prompt);
  prime(prompt, fresh);
  return fresh;
}

EmotionCue extract_cue(std::span<const ClipRef> clips, const CueBackend& backend, int turn_index) {
  if (clips.empty()) return EmotionCue{"", BackendKind::kNone, turn_index};
  const CuePrompt prompt = build_cue_prompt(clips);
  return EmotionCue{backend.answer(prompt), backend.kind(), turn_index};
}

}  // namespace smes::cues
