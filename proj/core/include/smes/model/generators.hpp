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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "smes/model/checkpoint.hpp"
#include "smes/reasoning/generator.hpp"

namespace smes::model {

// Generator backed by a trained transformer. The model is shared read-only.
class TransformerGenerator final : public reasoning::Generator {
 public:
  TransformerGenerator(std::shared_ptr<const Transformer> model, Vocab vocab);
  explicit TransformerGenerator(const Checkpoint& checkpoint);

  const Vocab& vocab() const override { return vocab_; }
  std::unique_ptr<reasoning::DecodeSession> start(std::span<const int> encoder_input) const override;

 private:
  std::shared_ptr<const Transformer> model_;
  Vocab vocab_;
};

// All-zero logits.
class UniformGenerator final : public reasoning::Generator {
 public:
  explicit UniformGenerator(Vocab vocab) : vocab_(std::move(vocab)) {}
  const Vocab& vocab() const override { return vocab_; }
  std::unique_ptr<reasoning::DecodeSession> start(std::span<const int> encoder_input) const override;

 private:
  Vocab vocab_;
};

// Gaussian logits drawn from a stream seeded by (seed, encoder input), so
// equal inputs give equal outputs.
class RandomGenerator final : public reasoning::Generator {
 public:
  RandomGenerator(Vocab vocab, std::uint64_t seed, double scale = 3.0);
  const Vocab& vocab() const override { return vocab_; }
  std::unique_ptr<reasoning::DecodeSession> start(std::span<const int> encoder_input) const override;

 private:
  Vocab vocab_;
  std::uint64_t seed_;
  double scale_;
};

// One scripted pipeline turn. Empty logit vectors mean "chosen label at
// `confidence`, every other label at 0"; otherwise they hold one logit per
// label in canonical order.
struct ScriptedTurn {
  Emotion user_emotion = Emotion::kNeutral;
  Strategy strategy = Strategy::kOpenQuestions;
  Emotion system_emotion = Emotion::kNeutral;
  std::string response;
  std::vector<double> user_emotion_logits;
  std::vector<double> strategy_logits;
  std::vector<double> system_emotion_logits;
  double confidence = 4.0;
};

// Replays a script: the n-th started session plays script[n % size].
class ScriptedGenerator final : public reasoning::Generator {
 public:
  // Builds the vocabulary from the scripted responses.
  explicit ScriptedGenerator(std::vector<ScriptedTurn> script);
  ScriptedGenerator(std::vector<ScriptedTurn> script, Vocab vocab);

  const Vocab& vocab() const override { return vocab_; }
  std::unique_ptr<reasoning::DecodeSession> start(std::span<const int> encoder_input) const override;
  void rewind() { next_.store(0); }

 private:
  std::vector<ScriptedTurn> script_;
  Vocab vocab_;
  mutable std::atomic<std::size_t> next_{0};
};

// {"turns": [{"user_emotion", "strategy", "system_emotion", "response",
//  optional "*_logits", optional "confidence"}]}
std::vector<ScriptedTurn> scripted_turns_from_json(const nlohmann::json& doc);

struct ExternalGeneratorConfig {
  std::string url;  // base URL; GET <url>/vocab, POST <url>/logits
  std::chrono::milliseconds timeout{30000};
};

// Remote scoring service. The vocabulary is fetched once at construction.
// Transport problems raise smes::Error("generator_transport_failure").
class ExternalGenerator final : public reasoning::Generator {
 public:
  explicit ExternalGenerator(ExternalGeneratorConfig config);
  const Vocab& vocab() const override { return vocab_; }
  std::unique_ptr<reasoning::DecodeSession> start(std::span<const int> encoder_input) const override;

 private:
  friend class ExternalSession;
  nlohmann::json call(const std::string& path, const nlohmann::json* body) const;

  ExternalGeneratorConfig config_;
  std::string base_, path_;
  Vocab vocab_;
};

// Opens a generator from a source string:
//   checkpoint:PATH | PATH ending in .ckpt   trained model
//   http://... | https://...                  external service
//   stub:uniform[:W1,W2,...]                   uniform logits
//   stub:random:SEED                           random logits
//   stub:script:PATH                           scripted replay (JSON file)
// Stub vocabularies default to the words of `fallback_texts`.
std::shared_ptr<reasoning::Generator> open_generator(std::string_view source,
                                                     std::span<const std::string> fallback_texts = {});

}  // namespace smes::model
