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

// Building blocks of the transformer with explicit forward caches and
// hand-written backward passes. Backward calls accumulate into Param::grad.

#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace smes::model {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Param {
  std::string name;
  Mat value;
  Mat grad;

  void init_normal(std::mt19937_64& rng, double stddev);
  void init_constant(double v);
  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
  Eigen::Index size() const { return value.size(); }
};

struct Linear {
  Param w;  // in x out
  Param b;  // 1 x out

  void init(const std::string& name, int in, int out, std::mt19937_64& rng, double stddev);
  Mat forward(const Mat& x) const;
  // Returns dL/dx.
  Mat backward(const Mat& x, const Mat& dy);
};

struct LayerNorm {
  Param gamma;
  Param beta;
  double eps = 1e-5;

  struct Cache {
    Mat xhat;
    Eigen::VectorXd inv_std;
  };

  void init(const std::string& name, int dim);
  Mat forward(const Mat& x, Cache* cache) const;
  Mat backward(const Cache& cache, const Mat& dy);
};

// Inverted dropout. An empty mask means the layer was inactive.
struct DropoutMask {
  Mat scale;

  static DropoutMask sample(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64* rng);
  Mat apply(const Mat& x) const;
};

struct MultiHeadAttention {
  Linear q, k, v, o;
  int n_heads = 1;
  bool causal = false;

  struct Cache {
    Mat xq, xkv;
    Mat queries, keys, values;
    std::vector<Mat> probs;  // per head, rows x keys
    Mat heads;               // concatenated head outputs
  };

  void init(const std::string& name, int d_model, int heads, bool is_causal, std::mt19937_64& rng,
            double stddev);
  Mat forward(const Mat& xq, const Mat& xkv, Cache* cache) const;
  // Returns {dL/dxq, dL/dxkv}.
  std::pair<Mat, Mat> backward(const Cache& cache, const Mat& dy);
};

struct FeedForward {
  Linear in, out;

  struct Cache {
    Mat x, pre, act;
  };

  void init(const std::string& name, int d_model, int ff_dim, std::mt19937_64& rng, double stddev);
  Mat forward(const Mat& x, Cache* cache) const;
  Mat backward(const Cache& cache, const Mat& dy);
};

// tanh approximation of GELU and its derivative.
double gelu(double x);
double gelu_grad(double x);

// Sinusoidal position table, rows x d_model.
Mat positional_encoding(Eigen::Index rows, int d_model);

}  // namespace smes::model
