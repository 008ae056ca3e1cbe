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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smes/cues/context.hpp"
#include "smes/labels.hpp"

namespace smes::reasoning {

// A therapist turn already in the conversation (R_i with its labels).
struct ResponseRecord {
  std::string text;
  std::optional<Emotion> emotion;    // SE_i
  std::optional<Strategy> strategy;  // S_i

  bool operator==(const ResponseRecord&) const = default;
};

struct HistoryEntry {
  int index = 0;
  std::variant<cues::TurnContext, ResponseRecord> value;

  bool is_context() const { return std::holds_alternative<cues::TurnContext>(value); }
  const cues::TurnContext& context() const { return std::get<cues::TurnContext>(value); }
  const ResponseRecord& response() const { return std::get<ResponseRecord>(value); }

  bool operator==(const HistoryEntry&) const = default;
};

// H_t: turn contexts and responses in order, with strictly increasing
// indices. Ready for generation when non-empty and ending in a context.
class History {
 public:
  void append_context(int index, cues::TurnContext context);
  void append_response(int index, ResponseRecord response);

  const std::vector<HistoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  int last_index() const { return entries_.empty() ? 0 : entries_.back().index; }

  // Throws smes::Error("empty_history" / "history_not_ready").
  void check_ready() const;

  bool operator==(const History&) const = default;

 private:
  void check_index(int index) const;

  std::vector<HistoryEntry> entries_;
};

// Gold quadruple for one therapist turn.
struct TurnTargets {
  Emotion user_emotion = Emotion::kNeutral;
  Strategy strategy = Strategy::kOpenQuestions;
  Emotion system_emotion = Emotion::kNeutral;
  std::string response;

  bool operator==(const TurnTargets&) const = default;
};

}  // namespace smes::reasoning
