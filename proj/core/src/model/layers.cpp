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

#include "smes/model/layers.hpp"

#include <cmath>
#include <limits>

namespace smes::model {

void Param::init_normal(std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Eigen::Index i = 0; i < value.size(); ++i) value.data()[i] = dist(rng);
  zero_grad();
}

void Param::init_constant(double v) {
  value.setConstant(v);
  zero_grad();
}

void Linear::init(const std::string& name, int in, int out, std::mt19937_64& rng, double stddev) {
  w.name = name + ".w";
  w.value.resize(in, out);
  w.init_normal(rng, stddev);
  b.name = name + ".b";
  b.value.resize(1, out);
  b.init_constant(0.0);
}

Mat Linear::forward(const Mat& x) const {
  Mat y = x * w.value;
  y.rowwise() += b.value.row(0);
  return y;
}

Mat Linear::backward(const Mat& x, const Mat& dy) {
  w.grad.noalias() += x.transpose() * dy;
  b.grad.row(0) += dy.colwise().sum();
  return dy * w.value.transpose();
}

void LayerNorm::init(const std::string& name, int dim) {
  gamma.name = name + ".gamma";
  gamma.value.resize(1, dim);
  gamma.init_constant(1.0);
  beta.name = name + ".beta";
  beta.value.resize(1, dim);
  beta.init_constant(0.0);
}

Mat LayerNorm::forward(const Mat& x, Cache* cache) const {
  const auto n = static_cast<double>(x.cols());
  Mat xhat(x.rows(), x.cols());
  Eigen::VectorXd inv_std(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mu = x.row(r).sum() / n;
    const auto centered = (x.row(r).array() - mu).matrix();
    const double var = centered.squaredNorm() / n;
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = centered * inv_std(r);
  }
  Mat y = xhat.array().rowwise() * gamma.value.row(0).array();
  y.rowwise() += beta.value.row(0);
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Mat LayerNorm::backward(const Cache& cache, const Mat& dy) {
  const auto n = static_cast<double>(dy.cols());
  gamma.grad.row(0) += (dy.array() * cache.xhat.array()).matrix().colwise().sum();
  beta.grad.row(0) += dy.colwise().sum();
  Mat dxhat = dy.array().rowwise() * gamma.value.row(0).array();
  Mat dx(dy.rows(), dy.cols());
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    const double sum = dxhat.row(r).sum();
    const double dot = dxhat.row(r).dot(cache.xhat.row(r));
    dx.row(r) = (cache.inv_std(r) / n) *
                (n * dxhat.row(r).array() - sum - cache.xhat.row(r).array() * dot).matrix();
  }
  return dx;
}

DropoutMask DropoutMask::sample(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64* rng) {
  DropoutMask m;
  if (rng == nullptr || p <= 0.0) return m;
  std::bernoulli_distribution keep(1.0 - p);
  m.scale.resize(rows, cols);
  for (Eigen::Index i = 0; i < m.scale.size(); ++i) m.scale.data()[i] = keep(*rng) ? 1.0 / (1.0 - p) : 0.0;
  return m;
}

Mat DropoutMask::apply(const Mat& x) const {
  if (scale.size() == 0) return x;
  return x.cwiseProduct(scale);
}

void MultiHeadAttention::init(const std::string& name, int d_model, int heads, bool is_causal,
                              std::mt19937_64& rng, double stddev) {
  n_heads = heads;
  causal = is_causal;
  q.init(name + ".q", d_model, d_model, rng, stddev);
  k.init(name + ".k", d_model, d_model, rng, stddev);
  v.init(name + ".v", d_model, d_model, rng, stddev);
  o.init(name + ".o", d_model, d_model, rng, stddev);
}

Mat MultiHeadAttention::forward(const Mat& xq, const Mat& xkv, Cache* cache) const {
  const Mat queries = q.forward(xq);
  const Mat keys = k.forward(xkv);
  const Mat values = v.forward(xkv);
  const Eigen::Index d = queries.cols();
  const Eigen::Index dh = d / n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const Eigen::Index tq = queries.rows();
  const Eigen::Index tk = keys.rows();

  Mat heads(tq, d);
  std::vector<Mat> probs;
  if (cache) probs.reserve(static_cast<std::size_t>(n_heads));
  for (int h = 0; h < n_heads; ++h) {
    const Eigen::Index c0 = h * dh;
    Mat s = (queries.middleCols(c0, dh) * keys.middleCols(c0, dh).transpose()) * scale;
    for (Eigen::Index i = 0; i < tq; ++i) {
      const Eigen::Index visible = causal ? std::min<Eigen::Index>(i + 1, tk) : tk;
      const double m = s.row(i).head(visible).maxCoeff();
      double z = 0.0;
      for (Eigen::Index j = 0; j < visible; ++j) {
        s(i, j) = std::exp(s(i, j) - m);
        z += s(i, j);
      }
      for (Eigen::Index j = 0; j < visible; ++j) s(i, j) /= z;
      for (Eigen::Index j = visible; j < tk; ++j) s(i, j) = 0.0;
    }
    heads.middleCols(c0, dh).noalias() = s * values.middleCols(c0, dh);
    if (cache) probs.push_back(std::move(s));
  }
  Mat y = o.forward(heads);
  if (cache) {
    cache->xq = xq;
    cache->xkv = xkv;
    cache->queries = queries;
    cache->keys = keys;
    cache->values = values;
    cache->probs = std::move(probs);
    cache->heads = std::move(heads);
  }
  return y;
}

std::pair<Mat, Mat> MultiHeadAttention::backward(const Cache& c, const Mat& dy) {
  const Mat dheads = o.backward(c.heads, dy);
  const Eigen::Index d = c.queries.cols();
  const Eigen::Index dh = d / n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Mat dq = Mat::Zero(c.queries.rows(), d);
  Mat dk = Mat::Zero(c.keys.rows(), d);
  Mat dv = Mat::Zero(c.values.rows(), d);
  for (int h = 0; h < n_heads; ++h) {
    const Eigen::Index c0 = h * dh;
    const Mat& p = c.probs[static_cast<std::size_t>(h)];
    const auto dout = dheads.middleCols(c0, dh);
    dv.middleCols(c0, dh).noalias() += p.transpose() * dout;
    Mat dp = dout * c.values.middleCols(c0, dh).transpose();
    // softmax backward, row-wise: ds = p * (dp - <p, dp>)
    const Eigen::VectorXd inner = (p.array() * dp.array()).rowwise().sum();
    Mat ds = (p.array() * (dp.array().colwise() - inner.array())).matrix() * scale;
    dq.middleCols(c0, dh).noalias() += ds * c.keys.middleCols(c0, dh);
    dk.middleCols(c0, dh).noalias() += ds.transpose() * c.queries.middleCols(c0, dh);
  }
  Mat dxq = q.backward(c.xq, dq);
  Mat dxkv = k.backward(c.xkv, dk);
  dxkv += v.backward(c.xkv, dv);
  return {std::move(dxq), std::move(dxkv)};
}

double gelu(double x) {
  constexpr double kC = 0.7978845608028654;  // sqrt(2/pi)
  return 0.5 * x * (1.0 + std::tanh(kC * (x + 0.044715 * x * x * x)));
}

double gelu_grad(double x) {
  constexpr double kC = 0.7978845608028654;
  const double t = std::tanh(kC * (x + 0.044715 * x * x * x));
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * kC * (1.0 + 3.0 * 0.044715 * x * x);
}

void FeedForward::init(const std::string& name, int d_model, int ff_dim, std::mt19937_64& rng, double stddev) {
  in.init(name + ".in", d_model, ff_dim, rng, stddev);
  out.init(name + ".out", ff_dim, d_model, rng, stddev);
}

Mat FeedForward::forward(const Mat& x, Cache* cache) const {
  Mat pre = in.forward(x);
  Mat act = pre.unaryExpr([](double v) { return gelu(v); });
  Mat y = out.forward(act);
  if (cache) {
    cache->x = x;
    cache->pre = std::move(pre);
    cache->act = std::move(act);
  }
  return y;
}

Mat FeedForward::backward(const Cache& c, const Mat& dy) {
  Mat dact = out.backward(c.act, dy);
  Mat dpre = dact.cwiseProduct(c.pre.unaryExpr([](double v) { return gelu_grad(v); }));
  return in.backward(c.x, dpre);
}

Mat positional_encoding(Eigen::Index rows, int d_model) {
  Mat pe(rows, d_model);
  for (Eigen::Index pos = 0; pos < rows; ++pos) {
    for (int i = 0; i < d_model; ++i) {
      const double rate = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / d_model);
      pe(pos, i) = (i % 2 == 0) ? std::sin(static_cast<double>(pos) * rate) : std::cos(static_cast<double>(pos) * rate);
    }
  }
  return pe;
}

}  // namespace smes::model
