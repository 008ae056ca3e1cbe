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

#include "smes/model/vocab.hpp"

#include <algorithm>
#include <set>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::model {
namespace {

std::vector<std::string> make_specials() {
  std::vector<std::string> out = {"<pad>", "<unk>", "<bos>", "<eos>",
                                  "<hist>", "<usr_emo>", "<strat>", "<sys_emo>", "<resp>"};
  for (auto e : kEmotionNames) out.push_back("<usr_emo:" + std::string(e) + ">");
  for (auto s : kStrategyNames) out.push_back("<strat:" + std::string(s) + ">");
  for (auto e : kEmotionNames) out.push_back("<sys_emo:" + std::string(e) + ">");
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string all;
  for (const auto& t : tokens) {
    all += t;
    all += '\n';
  }
  return all;
}

}  // namespace

const std::vector<std::string>& Vocab::special_tokens() {
  static const std::vector<std::string> kSpecials = make_specials();
  return kSpecials;
}

Vocab::Vocab() : Vocab(special_tokens()) {}

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (int i = 0; i < static_cast<int>(tokens_.size()); ++i) {
    if (!index_.emplace(tokens_[static_cast<std::size_t>(i)], i).second) {
      throw Error("invalid_vocab", "duplicate vocabulary entry '" + tokens_[static_cast<std::size_t>(i)] + "'");
    }
  }
  digest_ = util::sha256_hex(join_tokens(tokens_));
}

Vocab Vocab::build(std::span<const std::string> texts) {
  std::set<std::string> words;
  const auto& specials = special_tokens();
  for (const auto& text : texts) {
    for (auto& w : util::split_whitespace(text)) {
      if (std::find(specials.begin(), specials.end(), w) == specials.end()) words.insert(std::move(w));
    }
  }
  std::vector<std::string> tokens = specials;
  tokens.insert(tokens.end(), words.begin(), words.end());
  return Vocab(std::move(tokens));
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  const auto& specials = special_tokens();
  if (tokens.size() < specials.size() || !std::equal(specials.begin(), specials.end(), tokens.begin())) {
    throw Error("invalid_vocab", "token list does not start with the special token layout");
  }
  return Vocab(std::move(tokens));
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || id >= size()) throw Error("invalid_token_id", "token id out of range: " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

std::optional<int> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Emotion> Vocab::user_emotion_of(int id) const {
  if (id < kFirstUserEmotion || id >= kFirstStrategy) return std::nullopt;
  return static_cast<Emotion>(id - kFirstUserEmotion);
}

std::optional<Strategy> Vocab::strategy_of(int id) const {
  if (id < kFirstStrategy || id >= kFirstSystemEmotion) return std::nullopt;
  return static_cast<Strategy>(id - kFirstStrategy);
}

std::optional<Emotion> Vocab::system_emotion_of(int id) const {
  if (id < kFirstSystemEmotion || id >= kNumSpecials) return std::nullopt;
  return static_cast<Emotion>(id - kFirstSystemEmotion);
}

std::vector<int> Vocab::encode_text(std::string_view text) const {
  std::vector<int> ids;
  for (const auto& w : util::split_whitespace(text)) {
    auto it = index_.find(w);
    ids.push_back(it == index_.end() || it->second < kNumSpecials ? kUnk : it->second);
  }
  return ids;
}

std::string Vocab::decode_text(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) {
    if (id == kEos) break;
    if (!out.empty()) out += ' ';
    out += token(id);
  }
  return out;
}

}  // namespace smes::model
