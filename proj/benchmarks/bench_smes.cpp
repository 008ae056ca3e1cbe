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


#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "smes/corpus/agreement.hpp"
#include "smes/corpus/io.hpp"
#include "smes/eval/text_metrics.hpp"
#include "smes/model/generators.hpp"
#include "smes/model/loss.hpp"
#include "smes/model/transformer.hpp"
#include "smes/reasoning/examples.hpp"
#include "smes/reasoning/generate.hpp"

namespace {

using namespace smes;

std::vector<reasoning::TurnExample> examples() {
  static const auto ex = [] {
    cues::MockCueBackend mock;
    return reasoning::build_examples(corpus::load_corpus(std::string(SMES_FIXTURE_DIR) + "/mini_train.jsonl"), mock,
                                     reasoning::SegmentSchema{});
  }();
  return ex;
}

std::vector<int> random_tokens(std::mt19937_64& rng, int n, int vocab) {
  std::uniform_int_distribution<int> d(model::Vocab::kNumSpecials, vocab - 1);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& t : out) t = d(rng);
  return out;
}

void BM_ForwardBackward(benchmark::State& state) {
  model::ModelConfig cfg;
  const int vocab = 500;
  model::Transformer net(cfg, vocab);
  std::mt19937_64 rng(1);
  const auto enc = random_tokens(rng, static_cast<int>(state.range(0)), vocab);
  const auto dec = random_tokens(rng, 24, vocab);
  std::vector<int> targets(dec.begin() + 1, dec.end());
  targets.push_back(model::Vocab::kEos);
  const std::vector<std::uint8_t> mask(targets.size(), 1);
  for (auto _ : state) {
    model::Transformer::ForwardCache cache;
    const auto logits = net.forward(enc, dec, cache);
    net.zero_grad();
    net.backward(cache, model::nll_loss_grad(logits, targets, mask, 1.0));
    benchmark::DoNotOptimize(logits.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(enc.size() + dec.size()));
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GreedyTurn(benchmark::State& state) {
  const auto ex = examples();
  const auto vocab = model::Vocab::build(reasoning::example_texts(ex));
  auto net = std::make_shared<model::Transformer>(model::ModelConfig{}, vocab.size());
  model::TransformerGenerator gen(net, vocab);
  reasoning::DecodeConfig decode;
  decode.max_response_tokens = static_cast<int>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reasoning::sequential_generate(gen, ex[i++ % ex.size()].history, {}, decode));
  }
}
BENCHMARK(BM_GreedyTurn)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_RandomStubTurn(benchmark::State& state) {
  const auto ex = examples();
  model::RandomGenerator gen(model::Vocab::build(reasoning::example_texts(ex)), 7);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reasoning::sequential_generate(gen, ex[i++ % ex.size()].history, {}));
  }
}
BENCHMARK(BM_RandomStubTurn);

std::vector<std::string> sentences(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> len(5, 25), word(0, 299);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    for (int k = len(rng); k > 0; --k) s += "w" + std::to_string(word(rng)) + (k > 1 ? " " : "");
    out.push_back(s);
  }
  return out;
}

void BM_Bleu4(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto c = sentences(rng, static_cast<std::size_t>(state.range(0)));
  const auto r = sentences(rng, c.size());
  for (auto _ : state) benchmark::DoNotOptimize(eval::bleu(c, r, 4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bleu4)->Arg(100)->Arg(1000);

void BM_RougeL(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto c = sentences(rng, static_cast<std::size_t>(state.range(0)));
  const auto r = sentences(rng, c.size());
  for (auto _ : state) benchmark::DoNotOptimize(eval::rouge_l(c, r));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RougeL)->Arg(1000);

void BM_FleissKappa(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const std::int64_t raters = 3;
  std::uniform_int_distribution<std::size_t> cat(0, 9);
  corpus::RatingMatrix m(static_cast<std::size_t>(state.range(0)), std::vector<std::int64_t>(10, 0));
  for (auto& row : m) {
    for (std::int64_t r = 0; r < raters; ++r) ++row[cat(rng)];
  }
  for (auto _ : state) benchmark::DoNotOptimize(corpus::fleiss_kappa(m, raters));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FleissKappa)->Arg(1000)->Arg(30000);

}  // namespace

BENCHMARK_MAIN();
