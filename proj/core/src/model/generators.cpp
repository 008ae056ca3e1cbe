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

#include "smes/model/generators.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <httplib.h>

#include "smes/error.hpp"
#include "smes/util/util.hpp"

namespace smes::model {
namespace {

using reasoning::DecodeSession;

class TransformerSession final : public DecodeSession {
 public:
  TransformerSession(std::shared_ptr<const Transformer> model, std::span<const int> encoder_input)
      : model_(std::move(model)), memory_(model_->encode(encoder_input)) {}

  std::vector<double> next_logits(std::span<const int> prefix) override {
    const Mat logits = model_->decode(memory_, prefix);
    const auto last = logits.row(logits.rows() - 1);
    return {last.data(), last.data() + last.size()};
  }

  std::vector<std::vector<double>> prefix_logits(std::span<const int> sequence, std::size_t from) override {
    const Mat logits = model_->decode(memory_, sequence);
    std::vector<std::vector<double>> out;
    for (auto r = static_cast<Eigen::Index>(from); r < logits.rows(); ++r) {
      out.emplace_back(logits.row(r).data(), logits.row(r).data() + logits.cols());
    }
    return out;
  }

 private:
  std::shared_ptr<const Transformer> model_;
  Mat memory_;
};

class ConstantSession final : public DecodeSession {
 public:
  explicit ConstantSession(int size) : size_(size) {}
  std::vector<double> next_logits(std::span<const int>) override {
    return std::vector<double>(static_cast<std::size_t>(size_), 0.0);
  }

 private:
  int size_;
};

class RandomSession final : public DecodeSession {
 public:
  RandomSession(int size, std::uint64_t seed, double scale) : size_(size), rng_(seed), dist_(0.0, scale) {}
  std::vector<double> next_logits(std::span<const int>) override {
    std::vector<double> v(static_cast<std::size_t>(size_));
    for (double& x : v) x = dist_(rng_);
    return v;
  }

 private:
  int size_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_;
};

class ScriptedSession final : public DecodeSession {
 public:
  ScriptedSession(const ScriptedTurn& turn, const Vocab& vocab)
      : turn_(turn), vocab_(vocab), response_(vocab.encode_text(turn.response)) {}

  std::vector<double> next_logits(std::span<const int> prefix) override {
    std::vector<double> v(static_cast<std::size_t>(vocab_.size()), 0.0);
    std::size_t pos = prefix.size();
    while (pos > 0 && !is_marker(prefix[pos - 1])) --pos;
    if (pos == 0) return v;
    const int marker = prefix[pos - 1];
    const std::size_t emitted = prefix.size() - pos;
    switch (static_cast<Role>(marker - Vocab::kFirstRoleMarker)) {
      case Role::kUsrEmo:
        place(v, Vocab::kFirstUserEmotion, turn_.user_emotion_logits, index_of(turn_.user_emotion), kNumEmotions);
        break;
      case Role::kStrat:
        place(v, Vocab::kFirstStrategy, turn_.strategy_logits, index_of(turn_.strategy), kNumStrategies);
        break;
      case Role::kSysEmo:
        place(v, Vocab::kFirstSystemEmotion, turn_.system_emotion_logits, index_of(turn_.system_emotion),
              kNumEmotions);
        break;
      case Role::kResp:
        v[static_cast<std::size_t>(emitted < response_.size() ? response_[emitted] : Vocab::kEos)] = 10.0;
        break;
      default:
        break;
    }
    return v;
  }

 private:
  static bool is_marker(int id) {
    return id >= Vocab::kFirstRoleMarker && id < Vocab::kFirstRoleMarker + static_cast<int>(kNumRoles);
  }

  void place(std::vector<double>& v, int first, const std::vector<double>& explicit_logits, std::size_t chosen,
             std::size_t n) const {
    for (std::size_t i = 0; i < n; ++i) {
      v[static_cast<std::size_t>(first) + i] =
          explicit_logits.empty() ? (i == chosen ? turn_.confidence : 0.0) : explicit_logits[i];
    }
  }

  const ScriptedTurn& turn_;
  const Vocab& vocab_;
  std::vector<int> response_;
};

std::uint64_t mix_input(std::uint64_t seed, std::span<const int> tokens) {
  std::uint64_t h = seed ^ 0xcbf29ce484222325ULL;
  for (int t : tokens) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(t));
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> response_texts(const std::vector<ScriptedTurn>& script) {
  std::vector<std::string> texts;
  for (const auto& t : script) texts.push_back(t.response);
  return texts;
}

}  // namespace

TransformerGenerator::TransformerGenerator(std::shared_ptr<const Transformer> model, Vocab vocab)
    : model_(std::move(model)), vocab_(std::move(vocab)) {
  if (!model_) throw Error("invalid_generator", "no model");
  if (model_->vocab_size() != vocab_.size()) {
    throw Error("vocab_digest_mismatch", "model output size " + std::to_string(model_->vocab_size()) +
                                             " differs from vocabulary size " + std::to_string(vocab_.size()));
  }
}

TransformerGenerator::TransformerGenerator(const Checkpoint& ck) : TransformerGenerator(ck.model, ck.vocab) {}

std::unique_ptr<DecodeSession> TransformerGenerator::start(std::span<const int> encoder_input) const {
  return std::make_unique<TransformerSession>(model_, encoder_input);
}

std::unique_ptr<DecodeSession> UniformGenerator::start(std::span<const int>) const {
  return std::make_unique<ConstantSession>(vocab_.size());
}

RandomGenerator::RandomGenerator(Vocab vocab, std::uint64_t seed, double scale)
    : vocab_(std::move(vocab)), seed_(seed), scale_(scale) {}

std::unique_ptr<DecodeSession> RandomGenerator::start(std::span<const int> encoder_input) const {
  return std::make_unique<RandomSession>(vocab_.size(), mix_input(seed_, encoder_input), scale_);
}

ScriptedGenerator::ScriptedGenerator(std::vector<ScriptedTurn> script)
    : ScriptedGenerator(script, Vocab::build(response_texts(script))) {}

ScriptedGenerator::ScriptedGenerator(std::vector<ScriptedTurn> script, Vocab vocab)
    : script_(std::move(script)), vocab_(std::move(vocab)) {
  if (script_.empty()) throw Error("invalid_generator", "empty script");
  for (const auto& t : script_) {
    if ((!t.user_emotion_logits.empty() && t.user_emotion_logits.size() != kNumEmotions) ||
        (!t.strategy_logits.empty() && t.strategy_logits.size() != kNumStrategies) ||
        (!t.system_emotion_logits.empty() && t.system_emotion_logits.size() != kNumEmotions)) {
      throw Error("invalid_generator", "scripted logits need one entry per label");
    }
  }
}

std::unique_ptr<DecodeSession> ScriptedGenerator::start(std::span<const int>) const {
  const std::size_t n = next_.fetch_add(1);
  return std::make_unique<ScriptedSession>(script_[n % script_.size()], vocab_);
}

std::vector<ScriptedTurn> scripted_turns_from_json(const nlohmann::json& doc) {
  std::vector<ScriptedTurn> out;
  try {
    for (const auto& j : doc.at("turns")) {
      ScriptedTurn t;
      auto emo = [](const std::string& s) {
        auto e = parse_emotion(s);
        if (!e) throw Error("unknown_emotion_label", "unknown emotion '" + s + "'");
        return *e;
      };
      t.user_emotion = emo(j.at("user_emotion").get<std::string>());
      t.system_emotion = emo(j.at("system_emotion").get<std::string>());
      const auto s = parse_strategy(j.at("strategy").get<std::string>());
      if (!s) throw Error("unknown_strategy_label", "unknown strategy '" + j.at("strategy").get<std::string>() + "'");
      t.strategy = *s;
      t.response = j.at("response").get<std::string>();
      t.user_emotion_logits = j.value("user_emotion_logits", std::vector<double>{});
      t.strategy_logits = j.value("strategy_logits", std::vector<double>{});
      t.system_emotion_logits = j.value("system_emotion_logits", std::vector<double>{});
      t.confidence = j.value("confidence", 4.0);
      out.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_generator", std::string("malformed script: ") + e.what());
  }
  return out;
}

class ExternalSession final : public DecodeSession {
 public:
  ExternalSession(const ExternalGenerator& gen, std::span<const int> encoder_input)
      : gen_(gen), encoder_input_(encoder_input.begin(), encoder_input.end()) {}

  std::vector<double> next_logits(std::span<const int> prefix) override {
    const nlohmann::json body = {{"encoder_input", encoder_input_},
                                 {"prefix", std::vector<int>(prefix.begin(), prefix.end())}};
    const auto reply = gen_.call("/logits", &body);
    try {
      return reply.at("logits").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error("generator_bad_response", std::string("malformed logits: ") + e.what());
    }
  }

 private:
  const ExternalGenerator& gen_;
  std::vector<int> encoder_input_;
};

ExternalGenerator::ExternalGenerator(ExternalGeneratorConfig config) : config_(std::move(config)) {
  const auto scheme = config_.url.find("://");
  if (scheme == std::string::npos) throw Error("invalid_generator", "generator URL needs a scheme: " + config_.url);
  const auto slash = config_.url.find('/', scheme + 3);
  base_ = config_.url.substr(0, slash);
  path_ = slash == std::string::npos ? "" : config_.url.substr(slash);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  const auto reply = call("/vocab", nullptr);
  try {
    vocab_ = Vocab::from_tokens(reply.at("tokens").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error("generator_bad_response", std::string("malformed vocabulary: ") + e.what());
  }
}

nlohmann::json ExternalGenerator::call(const std::string& path, const nlohmann::json* body) const {
  httplib::Client client(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  auto res = body ? client.Post(path_ + path, body->dump(), "application/json") : client.Get(path_ + path);
  if (!res) {
    throw Error("generator_transport_failure",
                "transport failure: " + httplib::to_string(res.error()) + " (" + config_.url + ")");
  }
  if (res->status != 200) {
    throw Error("generator_transport_failure", "HTTP status " + std::to_string(res->status) + " from " + config_.url);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error("generator_bad_response", std::string("unparseable response: ") + e.what());
  }
}

std::unique_ptr<DecodeSession> ExternalGenerator::start(std::span<const int> encoder_input) const {
  return std::make_unique<ExternalSession>(*this, encoder_input);
}

std::shared_ptr<reasoning::Generator> open_generator(std::string_view source,
                                                     std::span<const std::string> fallback_texts) {
  const std::string s(source);
  auto starts = [&](std::string_view p) { return s.rfind(p, 0) == 0; };
  if (starts("http://") || starts("https://")) {
    return std::make_shared<ExternalGenerator>(ExternalGeneratorConfig{s});
  }
  if (starts("checkpoint:") || (s.size() > 5 && s.ends_with(".ckpt"))) {
    const std::string path = starts("checkpoint:") ? s.substr(11) : s;
    return std::make_shared<TransformerGenerator>(load_checkpoint(std::filesystem::path(path)));
  }
  if (starts("stub:uniform")) {
    if (s.size() > 13 && s[12] == ':') {
      std::vector<std::string> words{s.substr(13)};
      std::replace(words[0].begin(), words[0].end(), ',', ' ');
      return std::make_shared<UniformGenerator>(Vocab::build(words));
    }
    return std::make_shared<UniformGenerator>(Vocab::build(fallback_texts));
  }
  if (starts("stub:random")) {
    std::uint64_t seed = 0;
    if (s.size() > 12 && s[11] == ':') seed = std::stoull(s.substr(12));
    return std::make_shared<RandomGenerator>(Vocab::build(fallback_texts), seed);
  }
  if (starts("stub:script:")) {
    std::ifstream in(s.substr(12));
    if (!in) throw Error("io_error", "cannot open script " + s.substr(12));
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error("invalid_generator", std::string("malformed script: ") + e.what());
    }
    return std::make_shared<ScriptedGenerator>(scripted_turns_from_json(doc));
  }
  throw Error("invalid_generator", "unknown generator source '" + s + "'");
}

}  // namespace smes::model
