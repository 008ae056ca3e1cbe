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

#include "smes/model/trainer.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "smes/error.hpp"

namespace smes::model {
namespace {

struct AdamState {
  std::vector<Mat> m, v;
  long step = 0;
};

void adam_step(Transformer& model, AdamState& st, const OptimizerConfig& o) {
  if (st.m.empty()) {
    model.for_each_param([&](const Param& p) {
      st.m.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
      st.v.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
    });
  }
  double norm2 = 0.0;
  model.for_each_param([&](const Param& p) { norm2 += p.grad.squaredNorm(); });
  const double norm = std::sqrt(norm2);
  const double clip = (o.grad_clip > 0.0 && norm > o.grad_clip) ? o.grad_clip / norm : 1.0;

  ++st.step;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(st.step));
  std::size_t i = 0;
  model.for_each_param([&](Param& p) {
    Mat& m = st.m[i];
    Mat& v = st.v[i];
    const Mat g = p.grad * clip;
    m = o.beta1 * m + (1.0 - o.beta1) * g;
    v = o.beta2 * v + (1.0 - o.beta2) * g.cwiseProduct(g);
    p.value.array() -= o.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + o.eps);
    ++i;
  });
}

// Fisher-Yates with a fixed draw so the order only depends on the seed.
void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

void validate_optimizer(const OptimizerConfig& o) {
  if (!(o.lr > 0.0)) throw Error("invalid_optimizer_config", "lr must be positive");
  if (o.batch_size < 1) throw Error("invalid_optimizer_config", "batch_size must be >= 1");
  if (o.epochs < 0) throw Error("invalid_optimizer_config", "epochs must be >= 0");
  if (!(o.beta1 >= 0.0 && o.beta1 < 1.0 && o.beta2 >= 0.0 && o.beta2 < 1.0)) {
    throw Error("invalid_optimizer_config", "betas must lie in [0, 1)");
  }
}

}  // namespace

TeacherForcedBatch teacher_forced(const reasoning::TrainingSequence& seq) {
  TeacherForcedBatch b;
  b.encoder_input = seq.history_span();
  b.targets = seq.tokens;
  b.mask = seq.loss_mask;
  b.decoder_input.reserve(seq.size());
  b.decoder_input.push_back(Vocab::kBos);
  b.decoder_input.insert(b.decoder_input.end(), seq.tokens.begin(), seq.tokens.end() - 1);
  return b;
}

LossValue sequence_loss(const Transformer& model, const TeacherForcedBatch& b) {
  const Mat logits = model.decode(model.encode(b.encoder_input), b.decoder_input);
  return nll_loss(logits, b.targets, b.mask);
}

TrainResult train_examples(const std::vector<reasoning::TurnExample>& examples, const reasoning::SegmentSchema& schema,
                           const ModelConfig& config, const TrainOptions& options, const Vocab* vocab) {
  if (examples.empty()) throw Error("empty_corpus", "no training examples");
  schema.validate();
  config.validate();
  const OptimizerConfig& opt = options.optimizer;
  validate_optimizer(opt);

  TrainResult result;
  Checkpoint& ck = result.checkpoint;
  ck.config = config;
  ck.schema = schema;
  ck.vocab = vocab ? *vocab : Vocab::build(reasoning::example_texts(examples));

  std::vector<TeacherForcedBatch> data;
  data.reserve(examples.size());
  for (const auto& ex : examples) {
    data.push_back(teacher_forced(reasoning::linearize(ex.history, ex.gold, schema, ck.vocab,
                                                       static_cast<std::size_t>(config.context_len))));
  }

  ck.model = std::make_shared<Transformer>(config, ck.vocab.size());
  Transformer& model = *ck.model;
  std::mt19937_64 order_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::mt19937_64 dropout_rng(config.seed + 1);
  std::mt19937_64* drop = config.dropout > 0.0 ? &dropout_rng : nullptr;
  AdamState adam;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Transformer::ForwardCache cache;
  std::size_t batch_id = 0;

  for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
    shuffle(order, order_rng);
    double epoch_sum = 0.0;
    std::size_t epoch_count = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(opt.batch_size), ++batch_id) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(opt.batch_size));
      std::size_t tokens = 0;
      for (std::size_t k = start; k < stop; ++k) {
        for (auto m : data[order[k]].mask) tokens += m ? 1 : 0;
      }
      if (tokens == 0) continue;
      const double scale = 1.0 / static_cast<double>(tokens);
      model.zero_grad();
      double batch_sum = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const auto& b = data[order[k]];
        const Mat logits = model.forward(b.encoder_input, b.decoder_input, cache, drop);
        const LossValue lv = nll_loss(logits, b.targets, b.mask);
        batch_sum += lv.sum;
        model.backward(cache, nll_loss_grad(logits, b.targets, b.mask, scale));
      }
      if (!std::isfinite(batch_sum)) {
        throw Error("training_diverged", "non-finite loss at batch " + std::to_string(batch_id) + " (epoch " +
                                             std::to_string(epoch) + ")");
      }
      adam_step(model, adam, opt);
      epoch_sum += batch_sum;
      epoch_count += tokens;
    }
    const double epoch_loss = epoch_sum / static_cast<double>(epoch_count);
    result.loss_curve.push_back(epoch_loss);
    ck.metadata.epochs = epoch;
    ck.metadata.final_loss = epoch_loss;
    ck.metadata.loss_curve = result.loss_curve;
    if (options.on_epoch && !options.on_epoch(epoch, epoch_loss, ck)) break;
  }
  model.zero_grad();
  return result;
}

TrainResult train(const corpus::Corpus& corpus, const cues::CueBackend& cues, const reasoning::SegmentSchema& schema,
                  const ModelConfig& config, const TrainOptions& options) {
  if (corpus.dialogues.empty()) throw Error("empty_corpus", "training corpus has no dialogues");
  return train_examples(reasoning::build_examples(corpus, cues, schema), schema, config, options);
}

}  // namespace smes::model
