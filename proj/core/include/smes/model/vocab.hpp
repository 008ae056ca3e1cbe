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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smes/labels.hpp"
#include "smes/roles.hpp"

namespace smes::model {

// Word-level vocabulary. Ids [0, kNumSpecials) are atomic special tokens in
// a fixed layout; text words follow in lexicographic order. Text
// tokenization splits on whitespace and never yields a special id: a word
// spelled like a special maps to <unk>.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kFirstRoleMarker = 4;
  static constexpr int kFirstUserEmotion = kFirstRoleMarker + static_cast<int>(kNumRoles);
  static constexpr int kFirstStrategy = kFirstUserEmotion + static_cast<int>(kNumEmotions);
  static constexpr int kFirstSystemEmotion = kFirstStrategy + static_cast<int>(kNumStrategies);
  static constexpr int kNumSpecials = kFirstSystemEmotion + static_cast<int>(kNumEmotions);

  // Specials only.
  Vocab();

  // Specials followed by the distinct whitespace words of `texts`.
  static Vocab build(std::span<const std::string> texts);

  // Rebuilds from a full token list (as stored in checkpoints); the special
  // prefix must match the fixed layout.
  static Vocab from_tokens(std::vector<std::string> tokens);

  static const std::vector<std::string>& special_tokens();

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(int id) const;
  std::optional<int> find(std::string_view token) const;

  bool is_special(int id) const { return id >= 0 && id < kNumSpecials; }
  // Ids that may appear in a response: <unk>, <eos> and text words.
  bool is_response_token(int id) const { return id == kUnk || id == kEos || id >= kNumSpecials; }

  int role_marker(Role r) const { return kFirstRoleMarker + static_cast<int>(index_of(r)); }
  int user_emotion_token(Emotion e) const { return kFirstUserEmotion + static_cast<int>(index_of(e)); }
  int strategy_token(Strategy s) const { return kFirstStrategy + static_cast<int>(index_of(s)); }
  int system_emotion_token(Emotion e) const { return kFirstSystemEmotion + static_cast<int>(index_of(e)); }

  std::optional<Emotion> user_emotion_of(int id) const;
  std::optional<Strategy> strategy_of(int id) const;
  std::optional<Emotion> system_emotion_of(int id) const;

  std::vector<int> encode_text(std::string_view text) const;
  // Joins text tokens with single spaces; stops at <eos>.
  std::string decode_text(std::span<const int> ids) const;

  // SHA-256 over the newline-joined token list.
  const std::string& digest() const { return digest_; }

 private:
  explicit Vocab(std::vector<std::string> tokens);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  std::string digest_;
};

}  // namespace smes::model
