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


#include "seqtarget/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "gradcheck.h"
#include "seqtarget/errors.h"

namespace seqtarget {
namespace {

using testing::all_coords;
using testing::check_gradient;
using testing::random_problem;

double masked_loss(const testing::GradProblem& p, std::span<const double> theta) {
  ModelState m = p.model;
  std::copy(theta.begin(), theta.end(), m.params().begin());
  return cross_entropy(m, forward_with_mask(m, p.batch, p.mask), p.labels);
}

TEST(ModelConfigTest, ParameterCount) {
  ModelConfig cfg{100, 8, 16, 2, 0.2};
  EXPECT_EQ(cfg.out_dim(), 1u);
  EXPECT_EQ(cfg.num_params(), 100u * 8 + 8 * 16 + 16 + 16 * 1 + 1);
  EXPECT_EQ(cfg.num_params(), 961u);
  EXPECT_EQ(init_model(0, cfg).num_params(), 961u);
  cfg.num_classes = 5;
  EXPECT_EQ(cfg.out_dim(), 5u);
  EXPECT_EQ(cfg.num_params(), 100u * 8 + 8 * 16 + 16 + 16 * 5 + 5);
}

TEST(ModelConfigTest, Validation) {
  EXPECT_THROW(ModelState(ModelConfig{1, 8, 8, 2, 0.2}), ConfigError);
  EXPECT_THROW(ModelState(ModelConfig{10, 8, 8, 1, 0.2}), ConfigError);
  EXPECT_THROW(ModelState(ModelConfig{10, 8, 8, 2, 1.0}), ConfigError);
}

TEST(InitTest, DeterministicAndShaped) {
  const ModelConfig cfg{40, 6, 5, 3, 0.2};
  ModelState a = init_model(9, cfg);
  ModelState b = init_model(9, cfg);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.params()[cfg.embedding_dim], init_model(10, cfg).params()[cfg.embedding_dim]);
  for (double v : a.hidden_bias()) EXPECT_EQ(v, 0.0);
  for (double v : a.output_bias()) EXPECT_EQ(v, 0.0);
  for (double v : a.embedding_row(kPadToken)) EXPECT_EQ(v, 0.0);
  const double s = std::sqrt(6.0 / (cfg.embedding_dim + cfg.hidden_dim));
  for (double v : a.hidden_weights()) EXPECT_LE(std::abs(v), s);
}

TEST(InitTest, StructuredViewsAliasFlat) {
  ModelState m = init_model(1, {12, 3, 4, 2, 0.2});
  m.hidden_bias()[2] = 7.5;
  EXPECT_EQ(m.params()[m.layout().hidden_bias + 2], 7.5);
  m.params()[m.layout().embedding + 5 * 3 + 1] = -2.0;
  EXPECT_EQ(m.embedding_row(5)[1], -2.0);
}

TEST(ForwardTest, OutputRanges) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = random_problem(seed);
    const auto cache = forward(p.model, p.batch);
    for (std::size_t b = 0; b < p.batch.size(); ++b) {
      double row = 0.0;
      for (ClassId c = 0; c < p.config.num_classes; ++c) {
        EXPECT_GT(cache.prob(b, c), 0.0);
        EXPECT_LT(cache.prob(b, c), 1.0);
        row += cache.prob(b, c);
      }
      EXPECT_NEAR(row, 1.0, 1e-9);
    }
  }
}

TEST(ForwardTest, EvalModeIsPure) {
  const auto p = random_problem(3);
  const auto a = forward(p.model, p.batch);
  const auto b = forward(p.model, p.batch);
  EXPECT_EQ(a.probs, b.probs);
  for (double v : a.dropout_mask) EXPECT_EQ(v, 1.0);
}

TEST(ForwardTest, TrainModeUsesInvertedDropout) {
  ModelState m = init_model(4, {30, 8, 8, 2, 0.2});
  std::vector<FeatureVector> batch(200, FeatureVector{{2, 3, 4}});
  Rng rng(1);
  const auto cache = forward(m, batch, &rng);
  std::size_t dropped = 0;
  for (double v : cache.dropout_mask) {
    EXPECT_TRUE(v == 0.0 || std::abs(v - 1.25) < 1e-15);
    dropped += v == 0.0;
  }
  const double rate = static_cast<double>(dropped) / cache.dropout_mask.size();
  EXPECT_NEAR(rate, 0.2, 0.03);
}

TEST(ForwardTest, ZeroWeightsGiveHalf) {
  ModelState m({20, 4, 4, 2, 0.2});
  const std::vector<FeatureVector> batch = {{{2, 5, 7}}, {{0, 0}}};
  const auto cache = forward(m, batch);
  EXPECT_EQ(cache.prob(0, 1), 0.5);
  EXPECT_EQ(cache.prob(1, 0), 0.5);
}

TEST(ForwardTest, AllPadUsesZeroEmbedding) {
  ModelState m = init_model(2, {20, 4, 4, 2, 0.2});
  const std::vector<FeatureVector> batch = {{{0, 0, 0}}};
  const auto cache = forward(m, batch);
  EXPECT_EQ(cache.token_counts[0], 0u);
  for (double v : cache.pooled) EXPECT_EQ(v, 0.0);
}

TEST(ForwardTest, RejectsOutOfRangeToken) {
  ModelState m = init_model(2, {20, 4, 4, 2, 0.2});
  const std::vector<FeatureVector> batch = {{{25}}};
  EXPECT_THROW(forward(m, batch), DataError);
}

TEST(BackwardTest, MatchesFiniteDifferences) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto p = random_problem(seed);
    const auto cache = forward_with_mask(p.model, p.batch, p.mask);
    const auto grad = backward(p.model, cache, p.batch, p.labels);
    const auto coords = all_coords(p.model.num_params());
    const std::vector<double> theta(p.model.params().begin(), p.model.params().end());
    const auto r = check_gradient([&](auto t) { return masked_loss(p, t); }, theta, grad, coords);
    EXPECT_EQ(r.failures, 0u) << "seed " << seed << " worst rel " << r.worst_rel;
  }
}

TEST(BackwardTest, PadRowGetsNoGradient) {
  const auto p = random_problem(5);
  const auto grad = backward(p.model, forward(p.model, p.batch), p.batch, p.labels);
  for (std::size_t e = 0; e < p.config.embedding_dim; ++e) EXPECT_EQ(grad[e], 0.0);
}

TEST(BackwardTest, DuplicatedBatchSameGradient) {
  const auto p = random_problem(6);
  auto batch2 = p.batch;
  batch2.insert(batch2.end(), p.batch.begin(), p.batch.end());
  auto labels2 = p.labels;
  labels2.insert(labels2.end(), p.labels.begin(), p.labels.end());
  const auto g1 = backward(p.model, forward(p.model, p.batch), p.batch, p.labels);
  const auto g2 = backward(p.model, forward(p.model, batch2), batch2, labels2);
  for (std::size_t i = 0; i < g1.size(); ++i) EXPECT_NEAR(g1[i], g2[i], 1e-15);
}

TEST(BackwardTest, SaturatedPredictionHasTinyGradient) {
  ModelState m({10, 2, 2, 2, 0.0});
  m.output_bias()[0] = 60.0;  // p(class 1) = sigmoid(60)
  const std::vector<FeatureVector> batch = {{{2, 3}}};
  const std::vector<ClassId> labels = {1};
  const auto grad = backward(m, forward(m, batch), batch, labels);
  double norm = 0.0;
  for (double g : grad) norm += g * g;
  EXPECT_LT(std::sqrt(norm), 1e-20);
  const auto ll = log_likelihood_grad(m, batch[0], 1);
  for (double g : ll) EXPECT_LT(std::abs(g), 1e-20);
}

TEST(BackwardTest, DimensionMismatch) {
  const auto p = random_problem(7);
  const auto cache = forward(p.model, p.batch);
  std::vector<double> small(p.model.num_params() - 1);
  EXPECT_THROW(backward(p.model, cache, p.batch, p.labels, small), DataError);
  std::vector<ClassId> fewer(p.labels.begin(), p.labels.end() - 1);
  EXPECT_THROW(backward(p.model, cache, p.batch, fewer), DataError);
}

TEST(LogLikelihoodGradTest, NegatedCrossEntropyGradient) {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const auto p = random_problem(seed);
    const std::span<const FeatureVector> one(p.batch.data(), 1);
    const std::span<const ClassId> y(p.labels.data(), 1);
    const auto ce = backward(p.model, forward(p.model, one), one, y);
    const auto ll = log_likelihood_grad(p.model, p.batch[0], p.labels[0]);
    for (std::size_t i = 0; i < ce.size(); ++i) EXPECT_EQ(ll[i], -ce[i]);

    const std::vector<double> theta(p.model.params().begin(), p.model.params().end());
    auto loglik = [&](std::span<const double> t) {
      ModelState m = p.model;
      std::copy(t.begin(), t.end(), m.params().begin());
      return -eval_loss(m, one, y);
    };
    const auto coords = all_coords(theta.size());
    EXPECT_EQ(check_gradient(loglik, theta, ll, coords).failures, 0u);
  }
}

TEST(TrainingTest, LossDecreasesOnSeparableData) {
  ModelState m = init_model(12, {10, 4, 4, 2, 0.0});
  std::vector<FeatureVector> batch;
  std::vector<ClassId> labels;
  for (int i = 0; i < 20; ++i) {
    batch.push_back({{2, static_cast<TokenId>(4 + i % 3)}});
    labels.push_back(0);
    batch.push_back({{3, static_cast<TokenId>(4 + i % 3)}});
    labels.push_back(1);
  }
  const double before = eval_loss(m, batch, labels);
  std::vector<double> grad(m.num_params());
  for (int step = 0; step < 50; ++step) {
    backward(m, forward(m, batch), batch, labels, grad);
    for (std::size_t i = 0; i < grad.size(); ++i) m.params()[i] -= 0.5 * grad[i];
  }
  const double after = eval_loss(m, batch, labels);
  EXPECT_LT(after, before);
  EXPECT_LT(after, 0.5 * before);
  const auto pred = predict(m, batch);
  EXPECT_EQ(pred, labels);
}

TEST(CheckpointTest, BitwiseRoundTrip) {
  const auto p = random_problem(44);
  const std::string text = to_json(p.model).dump();
  const ModelState back = model_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back, p.model);
  const auto a = p.model.params();
  const auto b = back.params();
  EXPECT_EQ(0, std::memcmp(a.data(), b.data(), a.size() * sizeof(double)));
}

TEST(CheckpointTest, RejectsForeignDocuments) {
  EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"format":"other"})")), ParseError);
  auto j = to_json(random_problem(1).model);
  j["version"] = 99;
  EXPECT_THROW(model_from_json(j), ParseError);
  j = to_json(random_problem(1).model);
  j["theta"].erase(0);
  EXPECT_THROW(model_from_json(j), ParseError);
}

TEST(PredictTest, ChunkingDoesNotMatter) {
  ModelState m = init_model(8, {30, 5, 5, 3, 0.2});
  std::vector<FeatureVector> many;
  Rng rng(3);
  for (int i = 0; i < 600; ++i) {
    many.push_back({{static_cast<TokenId>(uniform_index(rng, 30)),
                     static_cast<TokenId>(uniform_index(rng, 30))}});
  }
  const auto all = predict(m, many);
  for (std::size_t i = 0; i < many.size(); i += 97) {
    EXPECT_EQ(predict(m, std::span(many).subspan(i, 1))[0], all[i]);
  }
}

}  // namespace
}  // namespace seqtarget
