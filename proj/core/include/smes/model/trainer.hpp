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

#include <functional>
#include <vector>

#include "smes/corpus/types.hpp"
#include "smes/cues/backend.hpp"
#include "smes/model/checkpoint.hpp"
#include "smes/model/loss.hpp"
#include "smes/reasoning/examples.hpp"
#include "smes/reasoning/linearize.hpp"

namespace smes::model {

struct OptimizerConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double grad_clip = 1.0;  // global L2 norm; <= 0 disables clipping
  int batch_size = 8;
  int epochs = 20;
};

struct TrainOptions {
  OptimizerConfig optimizer;
  // Called after every epoch with the 1-based epoch, its token-weighted mean
  // loss and the current state. Returning false stops training.
  std::function<bool(int epoch, double loss, const Checkpoint& state)> on_epoch;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<double> loss_curve;
};

// Builds examples and a vocabulary from the corpus, then trains.
// Throws smes::Error("empty_corpus") when there is nothing to train on.
TrainResult train(const corpus::Corpus& corpus, const cues::CueBackend& cues, const reasoning::SegmentSchema& schema,
                  const ModelConfig& config, const TrainOptions& options = {});

// Trains on prepared examples. A vocabulary is built from the examples
// unless one is given.
TrainResult train_examples(const std::vector<reasoning::TurnExample>& examples, const reasoning::SegmentSchema& schema,
                           const ModelConfig& config, const TrainOptions& options = {},
                           const Vocab* vocab = nullptr);

// Teacher-forced inputs for one linearized sequence.
struct TeacherForcedBatch {
  std::vector<int> encoder_input;
  std::vector<int> decoder_input;  // <bos> + Y[:-1]
  std::vector<int> targets;        // Y
  std::vector<std::uint8_t> mask;
};

TeacherForcedBatch teacher_forced(const reasoning::TrainingSequence& seq);

// Loss of one sequence under the model, without touching gradients.
LossValue sequence_loss(const Transformer& model, const TeacherForcedBatch& batch);

}  // namespace smes::model
