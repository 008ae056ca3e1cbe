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

#include <memory>
#include <span>
#include <vector>

#include "smes/model/vocab.hpp"

namespace smes::reasoning {

// Next-token scores for one encoder input. Sessions are single-threaded;
// generators hand out independent sessions and are otherwise read-only.
class DecodeSession {
 public:
  virtual ~DecodeSession() = default;
  // `prefix` starts with <bos>. Returns one logit per vocabulary id.
  virtual std::vector<double> next_logits(std::span<const int> prefix) = 0;

  // Logits after each prefix sequence[0..i] for i in [from, size). The
  // default calls next_logits once per position.
  virtual std::vector<std::vector<double>> prefix_logits(std::span<const int> sequence, std::size_t from);
};

class Generator {
 public:
  virtual ~Generator() = default;
  virtual const model::Vocab& vocab() const = 0;
  virtual std::unique_ptr<DecodeSession> start(std::span<const int> encoder_input) const = 0;
};

}  // namespace smes::reasoning
