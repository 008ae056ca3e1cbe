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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "smes/cues/prompt.hpp"
#include "smes/error.hpp"

namespace smes::cues {

enum class BackendKind : std::uint8_t { kExternal, kCached, kMock, kNone };

std::string_view to_string(BackendKind kind);

// Textual emotion cue for one turn. backend == kNone implies text is empty.
struct EmotionCue {
  std::string text;
  BackendKind backend = BackendKind::kNone;
  int turn_index = 0;

  bool operator==(const EmotionCue&) const = default;
};

// Raised by backends; the message is prefixed with the backend name.
class CueError : public Error {
 public:
  CueError(std::string kind, BackendKind backend, const std::string& message);
  BackendKind backend() const noexcept { return backend_; }

 private:
  BackendKind backend_;
};

// Answers a cue prompt. Implementations must tolerate concurrent calls.
class CueBackend {
 public:
  virtual ~CueBackend() = default;
  virtual BackendKind kind() const = 0;
  virtual std::string answer(const CuePrompt& prompt) const = 0;
};

// Deterministic stand-in: "[mock cue for <media_id>@<start_s>]" of the
// first clip.
class MockCueBackend final : public CueBackend {
 public:
  BackendKind kind() const override { return BackendKind::kMock; }
  std::string answer(const CuePrompt& prompt) const override;
};

struct ExternalCueConfig {
  std::string url;  // e.g. http://127.0.0.1:8088/cue
  std::chrono::milliseconds timeout{10000};
  int retries = 1;
  // Joins the entries of an {"answers": [...]} response.
  std::string answer_separator = " ";
};

// Posts {questions, media} to an HTTP endpoint and reads {answer} (or
// {answers: [...]}, joined with answer_separator).
class ExternalCueBackend final : public CueBackend {
 public:
  explicit ExternalCueBackend(ExternalCueConfig config);
  BackendKind kind() const override { return BackendKind::kExternal; }
  std::string answer(const CuePrompt& prompt) const override;

  const ExternalCueConfig& config() const { return config_; }

 private:
  ExternalCueConfig config_;
  std::string base_;  // scheme://host[:port]
  std::string path_;
};

// Content-addressed answer store: one file per key under `dir`, holding the
// answer text. On a miss, strict mode fails; otherwise the fallback is
// queried and its answer stored (write to a temp file, then rename).
class CachedCueBackend final : public CueBackend {
 public:
  CachedCueBackend(std::filesystem::path dir, bool strict,
                   std::shared_ptr<const CueBackend> fallback = nullptr);

  BackendKind kind() const override { return BackendKind::kCached; }
  std::string answer(const CuePrompt& prompt) const override;

  void prime(const CuePrompt& prompt, std::string_view answer) const;
  std::optional<std::string> lookup(const CuePrompt& prompt) const;

  // Hash of (media_id, start_s, end_s, kind) per clip plus the prompt hash.
  static std::string cache_key(const CuePrompt& prompt);

 private:
  std::filesystem::path dir_;
  bool strict_;
  std::shared_ptr<const CueBackend> fallback_;
};

// Wire encoding shared by the external backend and test servers.
std::string encode_cue_request(const CuePrompt& prompt);

// Runs the backend on the turn's clips. No clips yields an empty cue with
// backend kNone and never touches the backend.
EmotionCue extract_cue(std::span<const ClipRef> clips, const CueBackend& backend, int turn_index = 0);

}  // namespace smes::cues
