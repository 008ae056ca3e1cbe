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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smes/reasoning/generator.hpp"
#include "smes/reasoning/linearize.hpp"

namespace smes::reasoning {

enum class DecodeMode : std::uint8_t { kGreedy, kSample };

struct DecodeConfig {
  DecodeMode mode = DecodeMode::kGreedy;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  int max_response_tokens = 64;
  std::size_t history_budget = 256;
};

// Label distributions of the three classification stages, keyed by label
// name; each sums to 1.
struct StageScores {
  std::map<std::string, double> user_emotion;
  std::map<std::string, double> strategy;
  std::map<std::string, double> system_emotion;

  bool operator==(const StageScores&) const = default;
};

struct PipelineOutput {
  Emotion user_emotion = Emotion::kNeutral;    // E_t
  Strategy strategy = Strategy::kOpenQuestions;  // S_t
  Emotion system_emotion = Emotion::kNeutral;  // SE_t
  std::string response;                        // R_t
  StageScores stage_scores;
  std::vector<int> response_tokens;  // without <eos>
  bool truncated = false;            // no <eos> within max_response_tokens
  std::vector<Role> skipped_stages;  // label stages excluded by the schema

  bool operator==(const PipelineOutput&) const = default;
};

// The decoder prefix each stage conditioned on, and the span it appended.
struct GenerationTrace {
  std::vector<int> encoder_input;
  std::array<std::vector<int>, 4> conditioning;  // per stage, USR_EMO..RESP
  std::array<std::vector<int>, 4> output_span;
};

// Runs the four stages in order. Label stages renormalize the logits over
// their label tokens and take the argmax (ties go to the canonical label
// order). The response stage decodes text tokens until <eos> or the cap.
PipelineOutput sequential_generate(const Generator& generator, const History& history,
                                   const SegmentSchema& schema, const DecodeConfig& decode = {},
                                   GenerationTrace* trace = nullptr);

// Softmax restricted to `candidates`, returned in candidate order.
std::vector<double> restricted_softmax(std::span<const double> logits, std::span<const int> candidates);

nlohmann::json to_json(const PipelineOutput& output);
PipelineOutput pipeline_output_from_json(const nlohmann::json& doc);

// Checks the closed-vocabulary, non-empty response and score-sum
// invariants; throws smes::Error("invalid_pipeline_output").
void check_invariants(const PipelineOutput& output);

}  // namespace smes::reasoning
