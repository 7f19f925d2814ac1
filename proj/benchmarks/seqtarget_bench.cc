// Copyright 2026 The seqtarget Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <vector>

#include "seqtarget/featurizer.h"
#include "seqtarget/model.h"
#include "seqtarget/partition.h"
#include "seqtarget/synthetic.h"
#include "seqtarget/trainer.h"

namespace seqtarget {
namespace {

struct Batch {
  ModelState model;
  std::vector<FeatureVector> features;
  std::vector<ClassId> labels;
};

Batch make_batch(std::size_t batch_size, std::size_t max_len) {
  SyntheticConfig gen;
  const std::vector<std::size_t> counts(2, batch_size);
  const Dataset d = generate_synthetic(gen, counts, DatasetRole::kTrain, 1);
  const Vocabulary v = build_vocab(d, {});
  auto enc = encode_dataset(d, v, max_len);
  enc.features.resize(batch_size);
  enc.labels.resize(batch_size);
  return {init_model(2, {v.size(), 16, 16, 2, 0.2}), std::move(enc.features),
          std::move(enc.labels)};
}

void BM_ForwardBackward(benchmark::State& state) {
  const auto b = make_batch(static_cast<std::size_t>(state.range(0)), 128);
  Rng rng(3);
  std::vector<double> grad(b.model.num_params());
  for (auto _ : state) {
    const auto cache = forward(b.model, b.features, &rng);
    backward(b.model, cache, b.features, b.labels, grad);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(256);

void BM_Predict(benchmark::State& state) {
  const auto b = make_batch(1024, 128);
  for (auto _ : state) benchmark::DoNotOptimize(predict(b.model, b.features));
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Predict);

void BM_PlanSplits(benchmark::State& state) {
  SyntheticConfig gen;
  const std::vector<std::size_t> counts = {250, 12500};
  const Dataset d = generate_synthetic(gen, counts, DatasetRole::kTrain, 4);
  SplitConfig cfg;
  cfg.k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(plan_splits(d, cfg, 5));
}
BENCHMARK(BM_PlanSplits)->Arg(2)->Arg(4);

void BM_EwcPenalty(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  EwcAnchor anchor{std::vector<double>(n, 0.1), std::vector<double>(n, 0.01), 1000.0};
  std::vector<double> theta(n, 0.2), grad(n, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(add_ewc_penalty(theta, anchor, grad));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EwcPenalty)->Arg(1 << 16)->Arg(1 << 20);

void BM_FisherDiagonal(benchmark::State& state) {
  const auto b = make_batch(256, 128);
  const EncodedDataset d{b.features, b.labels, 2};
  for (auto _ : state) benchmark::DoNotOptimize(fisher_diagonal(b.model, d, 256, 1));
}
BENCHMARK(BM_FisherDiagonal);

}  // namespace
}  // namespace seqtarget

BENCHMARK_MAIN();
