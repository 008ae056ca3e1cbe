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

#include <cstddef>

#include "smes/model/config.hpp"

namespace smes::model {

inline constexpr std::size_t kGradientCheckMaxParams = 5000;

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t n_params = 0;
  std::size_t n_samples = 0;
};

// Compares analytic gradients of the per-token NLL with central differences
// (step 1e-5) at `n_samples` random coordinates of a model built from
// `config` over a small synthetic vocabulary and sequence. Parameters are
// redrawn from N(0, 0.5) before the check and dropout is disabled. The relative error is |a - n| / max(|a|, |n|, 1e-7).
// Throws smes::Error("model_too_large") above kGradientCheckMaxParams.
GradientCheckResult gradient_check_detailed(ModelConfig config, std::size_t n_samples);
double gradient_check(const ModelConfig& config, std::size_t n_samples);

// A configuration that fits the parameter bound.
ModelConfig gradient_check_config();

}  // namespace smes::model
