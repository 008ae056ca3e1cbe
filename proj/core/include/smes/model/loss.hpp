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

#include <cstdint>
#include <span>

#include "smes/model/layers.hpp"

namespace smes::model {

struct LossValue {
  double mean = 0.0;  // per masked token
  double sum = 0.0;   // unnormalized
  std::size_t count = 0;
};

// Negative log-likelihood of `targets` under row-wise softmax of `logits`,
// over positions where mask != 0. Throws smes::Error("empty_loss_mask") for
// an all-false mask and ("shape_mismatch") when sizes disagree.
LossValue nll_loss(const Mat& logits, std::span<const int> targets, std::span<const std::uint8_t> mask);

// d(scale * sum)/d(logits): softmax minus one-hot on masked rows.
Mat nll_loss_grad(const Mat& logits, std::span<const int> targets, std::span<const std::uint8_t> mask, double scale);

// Row-wise softmax; rows sum to 1.
Mat softmax_rows(const Mat& logits);

}  // namespace smes::model
