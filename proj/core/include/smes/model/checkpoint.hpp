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

// Checkpoint container, all integers little-endian:
//
//   bytes 0..7   "SMESCKPT"
//   u32          format version (1)
//   u64          header length H
//   H bytes      UTF-8 JSON header: config, schema, vocab tokens and digest,
//                training metadata, and the parameter index
//                [{name, rows, cols, offset}] with offsets in values
//   rest         float64 parameter values, row-major, in index order

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include "smes/model/config.hpp"
#include "smes/model/transformer.hpp"
#include "smes/model/vocab.hpp"
#include "smes/reasoning/schema.hpp"

namespace smes::model {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TrainingMetadata {
  int epochs = 0;
  double final_loss = 0.0;
  std::vector<double> loss_curve;

  bool operator==(const TrainingMetadata&) const = default;
};

struct Checkpoint {
  ModelConfig config;
  Vocab vocab;
  reasoning::SegmentSchema schema;
  TrainingMetadata metadata;
  std::shared_ptr<Transformer> model;
};

void save_checkpoint(const Checkpoint& checkpoint, std::ostream& out);
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);

// Throws smes::Error with kind "checkpoint_format", "checkpoint_shape_mismatch"
// or "vocab_digest_mismatch". With `expected_vocab` set, the stored digest
// must also match it.
Checkpoint load_checkpoint(std::istream& in, const Vocab* expected_vocab = nullptr);
Checkpoint load_checkpoint(const std::filesystem::path& path, const Vocab* expected_vocab = nullptr);

// "epoch,loss" rows, 1-based epochs, 17 significant digits.
void write_loss_curve_csv(std::ostream& out, const std::vector<double>& curve);

}  // namespace smes::model
