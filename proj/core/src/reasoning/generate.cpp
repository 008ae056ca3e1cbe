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

#include "smes/reasoning/generate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "smes/error.hpp"

namespace smes::reasoning {
namespace {

using model::Vocab;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_logits(std::span<const double> logits, const Vocab& vocab) {
  if (static_cast<int>(logits.size()) != vocab.size()) {
    throw Error("bad_logits", "generator returned " + std::to_string(logits.size()) + " logits for a vocabulary of " +
                                  std::to_string(vocab.size()));
  }
  for (double v : logits) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw Error("bad_logits", "generator returned a NaN or +inf logit");
    }
  }
}

// First candidate with the largest logit; candidates are in canonical order.
std::size_t argmax_first(std::span<const double> logits, std::span<const int> candidates) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (logits[static_cast<std::size_t>(candidates[i])] > logits[static_cast<std::size_t>(candidates[best])]) {
      best = i;
    }
  }
  return best;
}

struct LabelStage {
  Role role;
  std::vector<int> candidates;
  std::vector<std::string> names;
};

std::vector<LabelStage> label_stages(const Vocab& vocab) {
  LabelStage user{Role::kUsrEmo, {}, {}};
  LabelStage strat{Role::kStrat, {}, {}};
  LabelStage sys{Role::kSysEmo, {}, {}};
  for (auto e : all_emotions()) {
    user.candidates.push_back(vocab.user_emotion_token(e));
    user.names.emplace_back(to_string(e));
    sys.candidates.push_back(vocab.system_emotion_token(e));
    sys.names.emplace_back(to_string(e));
  }
  for (auto s : all_strategies()) {
    strat.candidates.push_back(vocab.strategy_token(s));
    strat.names.emplace_back(to_string(s));
  }
  return {std::move(user), std::move(strat), std::move(sys)};
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::vector<double>> DecodeSession::prefix_logits(std::span<const int> sequence, std::size_t from) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = from; i < sequence.size(); ++i) out.push_back(next_logits(sequence.first(i + 1)));
  return out;
}

std::vector<double> restricted_softmax(std::span<const double> logits, std::span<const int> candidates) {
  std::vector<double> p(candidates.size());
  double m = kNegInf;
  for (int c : candidates) m = std::max(m, logits[static_cast<std::size_t>(c)]);
  if (m == kNegInf) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  double z = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    p[i] = std::exp(logits[static_cast<std::size_t>(candidates[i])] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

PipelineOutput sequential_generate(const Generator& generator, const History& history,
                                   const SegmentSchema& schema, const DecodeConfig& decode,
                                   GenerationTrace* trace) {
  schema.validate();
  history.check_ready();
  if (decode.max_response_tokens < 1) throw Error("invalid_decode_config", "max_response_tokens must be >= 1");
  if (decode.mode == DecodeMode::kSample && !(decode.temperature > 0.0)) {
    throw Error("invalid_decode_config", "temperature must be positive");
  }
  const Vocab& vocab = generator.vocab();
  const std::vector<int> encoder_input = encode_history(history, schema, vocab, decode.history_budget);
  auto session = generator.start(encoder_input);

  std::vector<int> prefix;
  prefix.reserve(encoder_input.size() + 8 + static_cast<std::size_t>(decode.max_response_tokens));
  prefix.push_back(Vocab::kBos);
  prefix.insert(prefix.end(), encoder_input.begin(), encoder_input.end());
  if (trace) trace->encoder_input = encoder_input;

  PipelineOutput out;
  std::size_t stage_no = 0;
  for (const auto& stage : label_stages(vocab)) {
    if (trace) trace->conditioning[stage_no] = prefix;
    const int marker = marker_id(schema, stage.role, vocab);
    prefix.push_back(marker);
    std::vector<double> logits = session->next_logits(prefix);
    check_logits(logits, vocab);
    const auto probs = restricted_softmax(logits, stage.candidates);
    const std::size_t pick = argmax_first(logits, stage.candidates);

    std::map<std::string, double> scores;
    for (std::size_t i = 0; i < probs.size(); ++i) scores[stage.names[i]] = probs[i];
    switch (stage.role) {
      case Role::kUsrEmo:
        out.user_emotion = static_cast<Emotion>(pick);
        out.stage_scores.user_emotion = std::move(scores);
        break;
      case Role::kStrat:
        out.strategy = static_cast<Strategy>(pick);
        out.stage_scores.strategy = std::move(scores);
        break;
      default:
        out.system_emotion = static_cast<Emotion>(pick);
        out.stage_scores.system_emotion = std::move(scores);
        break;
    }

    if (schema.includes(stage.role)) {
      prefix.push_back(stage.candidates[pick]);
      if (trace) trace->output_span[stage_no] = {marker, stage.candidates[pick]};
    } else {
      prefix.pop_back();
      out.skipped_stages.push_back(stage.role);
      if (trace) trace->output_span[stage_no].clear();
    }
    ++stage_no;
  }

  if (trace) trace->conditioning[3] = prefix;
  const int resp_marker = marker_id(schema, Role::kResp, vocab);
  prefix.push_back(resp_marker);
  if (trace) trace->output_span[3] = {resp_marker};

  std::mt19937_64 rng(decode.seed);
  bool stopped = false;
  for (int step = 0; step < decode.max_response_tokens; ++step) {
    std::vector<double> logits = session->next_logits(prefix);
    check_logits(logits, vocab);
    std::vector<int> allowed;
    allowed.reserve(static_cast<std::size_t>(vocab.size()));
    for (int id = 0; id < vocab.size(); ++id) {
      if (!vocab.is_response_token(id)) continue;
      if (id == Vocab::kEos && step == 0) continue;
      allowed.push_back(id);
    }
    int next = allowed[argmax_first(logits, allowed)];
    if (decode.mode == DecodeMode::kSample) {
      std::vector<double> scaled(logits.size(), kNegInf);
      for (int id : allowed) scaled[static_cast<std::size_t>(id)] = logits[static_cast<std::size_t>(id)] / decode.temperature;
      const auto probs = restricted_softmax(scaled, allowed);
      const double u = uniform01(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < allowed.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
          next = allowed[i];
          break;
        }
      }
    }
    if (trace) trace->output_span[3].push_back(next);
    if (next == Vocab::kEos) {
      stopped = true;
      break;
    }
    prefix.push_back(next);
    out.response_tokens.push_back(next);
  }
  out.truncated = !stopped;
  out.response = vocab.decode_text(out.response_tokens);
  return out;
}

nlohmann::json to_json(const PipelineOutput& o) {
  nlohmann::json skipped = nlohmann::json::array();
  for (auto r : o.skipped_stages) skipped.push_back(std::string(to_string(r)));
  return {
      {"user_emotion", std::string(to_string(o.user_emotion))},
      {"strategy", std::string(to_string(o.strategy))},
      {"system_emotion", std::string(to_string(o.system_emotion))},
      {"response", o.response},
      {"stage_scores",
       {{"user_emotion", o.stage_scores.user_emotion},
        {"strategy", o.stage_scores.strategy},
        {"system_emotion", o.stage_scores.system_emotion}}},
      {"truncated", o.truncated},
      {"skipped_stages", std::move(skipped)},
  };
}

PipelineOutput pipeline_output_from_json(const nlohmann::json& doc) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key)) throw Error("invalid_pipeline_output", std::string("missing field '") + key + "'");
    return doc.at(key);
  };
  PipelineOutput o;
  try {
    auto ue = parse_emotion(need("user_emotion").get<std::string>());
    auto st = parse_strategy(need("strategy").get<std::string>());
    auto se = parse_emotion(need("system_emotion").get<std::string>());
    if (!ue || !st || !se) throw Error("invalid_pipeline_output", "label outside the closed vocabulary");
    o.user_emotion = *ue;
    o.strategy = *st;
    o.system_emotion = *se;
    o.response = need("response").get<std::string>();
    const auto& scores = need("stage_scores");
    o.stage_scores.user_emotion = scores.at("user_emotion").get<std::map<std::string, double>>();
    o.stage_scores.strategy = scores.at("strategy").get<std::map<std::string, double>>();
    o.stage_scores.system_emotion = scores.at("system_emotion").get<std::map<std::string, double>>();
    o.truncated = doc.value("truncated", false);
    if (doc.contains("skipped_stages")) {
      for (const auto& r : doc.at("skipped_stages")) {
        auto role = parse_role(r.get<std::string>());
        if (!role) throw Error("invalid_pipeline_output", "unknown stage in skipped_stages");
        o.skipped_stages.push_back(*role);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_pipeline_output", std::string("malformed pipeline output: ") + e.what());
  }
  return o;
}

void check_invariants(const PipelineOutput& o) {
  auto fail = [](const std::string& why) { throw Error("invalid_pipeline_output", why); };
  if (index_of(o.user_emotion) >= kNumEmotions || index_of(o.system_emotion) >= kNumEmotions) fail("emotion out of range");
  if (index_of(o.strategy) >= kNumStrategies) fail("strategy out of range");
  if (o.response.empty()) fail("empty response");
  auto check_map = [&](const std::map<std::string, double>& m, auto names, const char* stage) {
    if (m.size() != names.size()) fail(std::string(stage) + " scores do not cover the label set");
    double sum = 0.0;
    for (auto n : names) {
      auto it = m.find(std::string(n));
      if (it == m.end()) fail(std::string(stage) + " scores miss label " + std::string(n));
      if (!(it->second >= 0.0)) fail(std::string(stage) + " has a negative score");
      sum += it->second;
    }
    if (std::abs(sum - 1.0) > 1e-6) fail(std::string(stage) + " scores do not sum to 1");
  };
  check_map(o.stage_scores.user_emotion, kEmotionNames, "user_emotion");
  check_map(o.stage_scores.strategy, kStrategyNames, "strategy");
  check_map(o.stage_scores.system_emotion, kEmotionNames, "system_emotion");
}

}  // namespace smes::reasoning
