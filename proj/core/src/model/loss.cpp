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

#include "smes/model/loss.hpp"

#include <cmath>
#include <string>

#include "smes/error.hpp"

namespace smes::model {
namespace {

void check_shapes(const Mat& logits, std::span<const int> targets, std::span<const std::uint8_t> mask) {
  const auto rows = static_cast<std::size_t>(logits.rows());
  if (targets.size() != rows || mask.size() != rows) {
    throw Error("shape_mismatch", "logits have " + std::to_string(rows) + " rows, targets " +
                                      std::to_string(targets.size()) + ", mask " + std::to_string(mask.size()));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (mask[i] && (targets[i] < 0 || targets[i] >= logits.cols())) {
      throw Error("shape_mismatch", "target id out of range at position " + std::to_string(i));
    }
  }
}

}  // namespace

Mat softmax_rows(const Mat& logits) {
  Mat p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    p.row(r) = (logits.row(r).array() - m).exp().matrix();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

LossValue nll_loss(const Mat& logits, std::span<const int> targets, std::span<const std::uint8_t> mask) {
  check_shapes(logits, targets, mask);
  LossValue out;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    if (!mask[static_cast<std::size_t>(r)]) continue;
    const double m = logits.row(r).maxCoeff();
    const double lse = m + std::log((logits.row(r).array() - m).exp().sum());
    out.sum += lse - logits(r, targets[static_cast<std::size_t>(r)]);
    ++out.count;
  }
  if (out.count == 0) throw Error("empty_loss_mask", "loss mask selects no positions");
  out.mean = out.sum / static_cast<double>(out.count);
  return out;
}

Mat nll_loss_grad(const Mat& logits, std::span<const int> targets, std::span<const std::uint8_t> mask,
                  double scale) {
  check_shapes(logits, targets, mask);
  Mat g = softmax_rows(logits);
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    if (!mask[static_cast<std::size_t>(r)]) {
      g.row(r).setZero();
      continue;
    }
    g(r, targets[static_cast<std::size_t>(r)]) -= 1.0;
    g.row(r) *= scale;
  }
  return g;
}

}  // namespace smes::model
