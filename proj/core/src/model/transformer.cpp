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

#include "smes/model/transformer.hpp"

#include <cmath>

#include "smes/error.hpp"

namespace smes::model {
namespace {

constexpr double kInitStd = 0.02;

}  // namespace

Transformer::Transformer(const ModelConfig& config, int vocab_size) : config_(config), vocab_size_(vocab_size) {
  config_.validate();
  if (vocab_size < 1) throw Error("invalid_model_config", "vocabulary must be non-empty");
  std::mt19937_64 rng(config_.seed);
  const int d = config_.d_model;

  embedding_.name = "embedding";
  embedding_.value.resize(vocab_size, d);
  embedding_.init_normal(rng, kInitStd);

  enc_.resize(static_cast<std::size_t>(config_.n_enc_layers));
  for (std::size_t i = 0; i < enc_.size(); ++i) {
    const std::string p = "enc." + std::to_string(i);
    auto& l = enc_[i];
    l.norm1.init(p + ".norm1", d);
    l.self_attn.init(p + ".self_attn", d, config_.n_heads, false, rng, kInitStd);
    l.norm2.init(p + ".norm2", d);
    l.ff.init(p + ".ff", d, config_.ff_dim, rng, kInitStd);
  }
  dec_.resize(static_cast<std::size_t>(config_.n_dec_layers));
  for (std::size_t i = 0; i < dec_.size(); ++i) {
    const std::string p = "dec." + std::to_string(i);
    auto& l = dec_[i];
    l.norm1.init(p + ".norm1", d);
    l.self_attn.init(p + ".self_attn", d, config_.n_heads, true, rng, kInitStd);
    l.norm2.init(p + ".norm2", d);
    l.cross_attn.init(p + ".cross_attn", d, config_.n_heads, false, rng, kInitStd);
    l.norm3.init(p + ".norm3", d);
    l.ff.init(p + ".ff", d, config_.ff_dim, rng, kInitStd);
  }
  enc_norm_.init("enc_norm", d);
  dec_norm_.init("dec_norm", d);
  out_.init("out", d, vocab_size, rng, kInitStd);
}

Mat Transformer::embed(std::span<const int> tokens) const {
  const auto n = static_cast<Eigen::Index>(tokens.size());
  const double scale = std::sqrt(static_cast<double>(config_.d_model));
  Mat x = positional_encoding(n, config_.d_model);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int id = tokens[static_cast<std::size_t>(i)];
    if (id < 0 || id >= vocab_size_) throw Error("invalid_token_id", "token id out of range: " + std::to_string(id));
    x.row(i) += scale * embedding_.value.row(id);
  }
  return x;
}

void Transformer::embed_backward(std::span<const int> tokens, const Mat& dx) {
  const double scale = std::sqrt(static_cast<double>(config_.d_model));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    embedding_.grad.row(tokens[i]) += scale * dx.row(static_cast<Eigen::Index>(i));
  }
}

Mat Transformer::encode(std::span<const int> tokens) const {
  if (tokens.empty()) throw Error("empty_encoder_input", "encoder input is empty");
  Mat x = embed(tokens);
  for (const auto& l : enc_) {
    Mat h = l.norm1.forward(x, nullptr);
    x += l.self_attn.forward(h, h, nullptr);
    x += l.ff.forward(l.norm2.forward(x, nullptr), nullptr);
  }
  return enc_norm_.forward(x, nullptr);
}

Mat Transformer::decode(const Mat& memory, std::span<const int> decoder_tokens) const {
  Mat x = embed(decoder_tokens);
  for (const auto& l : dec_) {
    Mat h = l.norm1.forward(x, nullptr);
    x += l.self_attn.forward(h, h, nullptr);
    x += l.cross_attn.forward(l.norm2.forward(x, nullptr), memory, nullptr);
    x += l.ff.forward(l.norm3.forward(x, nullptr), nullptr);
  }
  return out_.forward(dec_norm_.forward(x, nullptr));
}

Mat Transformer::forward(std::span<const int> encoder_tokens, std::span<const int> decoder_tokens,
                         ForwardCache& c, std::mt19937_64* rng) const {
  if (encoder_tokens.empty()) throw Error("empty_encoder_input", "encoder input is empty");
  const double p = config_.dropout;
  c.encoder_tokens.assign(encoder_tokens.begin(), encoder_tokens.end());
  c.decoder_tokens.assign(decoder_tokens.begin(), decoder_tokens.end());
  c.enc.assign(enc_.size(), {});
  c.dec.assign(dec_.size(), {});

  Mat x = embed(encoder_tokens);
  for (std::size_t i = 0; i < enc_.size(); ++i) {
    const auto& l = enc_[i];
    auto& lc = c.enc[i];
    Mat h = l.norm1.forward(x, &lc.norm1);
    Mat a = l.self_attn.forward(h, h, &lc.attn);
    lc.drop_attn = DropoutMask::sample(a.rows(), a.cols(), p, rng);
    x += lc.drop_attn.apply(a);
    Mat f = l.ff.forward(l.norm2.forward(x, &lc.norm2), &lc.ff);
    lc.drop_ff = DropoutMask::sample(f.rows(), f.cols(), p, rng);
    x += lc.drop_ff.apply(f);
  }
  const Mat memory = enc_norm_.forward(x, &c.enc_norm);

  Mat y = embed(decoder_tokens);
  for (std::size_t i = 0; i < dec_.size(); ++i) {
    const auto& l = dec_[i];
    auto& lc = c.dec[i];
    Mat h = l.norm1.forward(y, &lc.norm1);
    Mat a = l.self_attn.forward(h, h, &lc.self_attn);
    lc.drop_self = DropoutMask::sample(a.rows(), a.cols(), p, rng);
    y += lc.drop_self.apply(a);
    Mat ca = l.cross_attn.forward(l.norm2.forward(y, &lc.norm2), memory, &lc.cross_attn);
    lc.drop_cross = DropoutMask::sample(ca.rows(), ca.cols(), p, rng);
    y += lc.drop_cross.apply(ca);
    Mat f = l.ff.forward(l.norm3.forward(y, &lc.norm3), &lc.ff);
    lc.drop_ff = DropoutMask::sample(f.rows(), f.cols(), p, rng);
    y += lc.drop_ff.apply(f);
  }
  c.dec_hidden = dec_norm_.forward(y, &c.dec_norm);
  return out_.forward(c.dec_hidden);
}

void Transformer::backward(const ForwardCache& c, const Mat& dlogits) {
  Mat dy = dec_norm_.backward(c.dec_norm, out_.backward(c.dec_hidden, dlogits));
  Mat dmemory = Mat::Zero(static_cast<Eigen::Index>(c.encoder_tokens.size()), config_.d_model);

  for (std::size_t i = dec_.size(); i-- > 0;) {
    auto& l = dec_[i];
    const auto& lc = c.dec[i];
    dy += l.norm3.backward(lc.norm3, l.ff.backward(lc.ff, lc.drop_ff.apply(dy)));
    auto [dq_cross, dmem] = l.cross_attn.backward(lc.cross_attn, lc.drop_cross.apply(dy));
    dmemory += dmem;
    dy += l.norm2.backward(lc.norm2, dq_cross);
    auto [dq_self, dkv_self] = l.self_attn.backward(lc.self_attn, lc.drop_self.apply(dy));
    dy += l.norm1.backward(lc.norm1, dq_self + dkv_self);
  }
  embed_backward(c.decoder_tokens, dy);

  Mat dx = enc_norm_.backward(c.enc_norm, dmemory);
  for (std::size_t i = enc_.size(); i-- > 0;) {
    auto& l = enc_[i];
    const auto& lc = c.enc[i];
    dx += l.norm2.backward(lc.norm2, l.ff.backward(lc.ff, lc.drop_ff.apply(dx)));
    auto [dq, dkv] = l.self_attn.backward(lc.attn, lc.drop_attn.apply(dx));
    dx += l.norm1.backward(lc.norm1, dq + dkv);
  }
  embed_backward(c.encoder_tokens, dx);
}

void Transformer::zero_grad() {
  for_each_param([](Param& p) { p.zero_grad(); });
}

namespace {

template <typename Self, typename F>
void visit(Self& self_embedding, auto& enc, auto& dec, auto& enc_norm, auto& dec_norm, auto& out, F&& f) {
  auto linear = [&](auto& l) {
    f(l.w);
    f(l.b);
  };
  auto norm = [&](auto& n) {
    f(n.gamma);
    f(n.beta);
  };
  auto attn = [&](auto& a) {
    linear(a.q);
    linear(a.k);
    linear(a.v);
    linear(a.o);
  };
  auto ff = [&](auto& x) {
    linear(x.in);
    linear(x.out);
  };
  f(self_embedding);
  for (auto& l : enc) {
    norm(l.norm1);
    attn(l.self_attn);
    norm(l.norm2);
    ff(l.ff);
  }
  for (auto& l : dec) {
    norm(l.norm1);
    attn(l.self_attn);
    norm(l.norm2);
    attn(l.cross_attn);
    norm(l.norm3);
    ff(l.ff);
  }
  norm(enc_norm);
  norm(dec_norm);
  linear(out);
}

}  // namespace

void Transformer::for_each_param(const std::function<void(Param&)>& f) {
  visit<Param>(embedding_, enc_, dec_, enc_norm_, dec_norm_, out_, f);
}

void Transformer::for_each_param(const std::function<void(const Param&)>& f) const {
  visit<const Param>(embedding_, enc_, dec_, enc_norm_, dec_norm_, out_, f);
}

std::size_t Transformer::parameter_count() const {
  std::size_t n = 0;
  for_each_param([&](const Param& p) { n += static_cast<std::size_t>(p.size()); });
  return n;
}

}  // namespace smes::model
