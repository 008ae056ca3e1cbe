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
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "smes/model/config.hpp"
#include "smes/model/layers.hpp"

namespace smes::model {

// Pre-norm encoder-decoder transformer over a shared token embedding. The
// encoder reads the history span; the decoder reads the whole linearized
// sequence shifted right, attending to the encoder output.
class Transformer {
 public:
  struct EncoderLayer {
    LayerNorm norm1, norm2;
    MultiHeadAttention self_attn;
    FeedForward ff;
  };

  struct DecoderLayer {
    LayerNorm norm1, norm2, norm3;
    MultiHeadAttention self_attn, cross_attn;
    FeedForward ff;
  };

  struct EncoderLayerCache {
    LayerNorm::Cache norm1, norm2;
    MultiHeadAttention::Cache attn;
    FeedForward::Cache ff;
    DropoutMask drop_attn, drop_ff;
  };

  struct DecoderLayerCache {
    LayerNorm::Cache norm1, norm2, norm3;
    MultiHeadAttention::Cache self_attn, cross_attn;
    FeedForward::Cache ff;
    DropoutMask drop_self, drop_cross, drop_ff;
  };

  struct ForwardCache {
    std::vector<int> encoder_tokens, decoder_tokens;
    std::vector<EncoderLayerCache> enc;
    std::vector<DecoderLayerCache> dec;
    LayerNorm::Cache enc_norm, dec_norm;
    Mat dec_hidden;  // decoder output after the final norm
  };

  Transformer(const ModelConfig& config, int vocab_size);

  const ModelConfig& config() const { return config_; }
  int vocab_size() const { return vocab_size_; }

  Mat encode(std::span<const int> tokens) const;
  // Logits for every decoder position, decoder_tokens.size() x vocab.
  Mat decode(const Mat& memory, std::span<const int> decoder_tokens) const;

  // Training forward pass. With `dropout_rng` set, dropout is active.
  Mat forward(std::span<const int> encoder_tokens, std::span<const int> decoder_tokens, ForwardCache& cache,
              std::mt19937_64* dropout_rng = nullptr) const;
  // Accumulates parameter gradients for dL/dlogits.
  void backward(const ForwardCache& cache, const Mat& dlogits);

  void zero_grad();

  // Visits parameters in a fixed order.
  void for_each_param(const std::function<void(Param&)>& f);
  void for_each_param(const std::function<void(const Param&)>& f) const;
  std::size_t parameter_count() const;

 private:
  Mat embed(std::span<const int> tokens) const;
  void embed_backward(std::span<const int> tokens, const Mat& dx);

  ModelConfig config_;
  int vocab_size_;
  Param embedding_;  // vocab x d_model
  std::vector<EncoderLayer> enc_;
  std::vector<DecoderLayer> dec_;
  LayerNorm enc_norm_, dec_norm_;
  Linear out_;
};

}  // namespace smes::model
