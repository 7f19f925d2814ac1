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

#ifndef SEQTARGET_MODEL_H_
#define SEQTARGET_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqtarget/corpus.h"
#include "seqtarget/featurizer.h"
#include "seqtarget/random.h"

namespace seqtarget {

// Mean-pooled embedding -> ReLU hidden layer (dropout) -> sigmoid/softmax.
struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t embedding_dim = 16;
  std::size_t hidden_dim = 16;
  std::size_t num_classes = 2;
  double dropout = 0.2;

  // One sigmoid logit for two classes, one softmax logit per class otherwise.
  std::size_t out_dim() const { return num_classes == 2 ? 1 : num_classes; }
  std::size_t num_params() const;
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Offsets of each parameter block inside the flat vector. Matrices are
// row-major: embedding [vocab][emb], hidden weights [emb][hidden], output
// weights [hidden][out].
struct ParamLayout {
  std::size_t embedding = 0;
  std::size_t hidden_weights = 0;
  std::size_t hidden_bias = 0;
  std::size_t output_weights = 0;
  std::size_t output_bias = 0;
  std::size_t total = 0;

  static ParamLayout of(const ModelConfig& cfg);

  friend bool operator==(const ParamLayout&, const ParamLayout&) = default;
};

// Flat parameter vector theta with structured views aliasing it.
class ModelState {
 public:
  explicit ModelState(ModelConfig config, std::uint64_t seed = 0);

  const ModelConfig& config() const { return config_; }
  const ParamLayout& layout() const { return layout_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t num_params() const { return theta_.size(); }

  std::span<double> params() { return theta_; }
  std::span<const double> params() const { return theta_; }

  std::span<double> embedding() { return block(layout_.embedding, layout_.hidden_weights); }
  std::span<double> embedding_row(TokenId t) {
    return params().subspan(layout_.embedding + t * config_.embedding_dim,
                            config_.embedding_dim);
  }
  std::span<double> hidden_weights() { return block(layout_.hidden_weights, layout_.hidden_bias); }
  std::span<double> hidden_bias() { return block(layout_.hidden_bias, layout_.output_weights); }
  std::span<double> output_weights() { return block(layout_.output_weights, layout_.output_bias); }
  std::span<double> output_bias() { return block(layout_.output_bias, layout_.total); }

  friend bool operator==(const ModelState&, const ModelState&) = default;

 private:
  std::span<double> block(std::size_t begin, std::size_t end) {
    return params().subspan(begin, end - begin);
  }

  ModelConfig config_;
  ParamLayout layout_;
  std::uint64_t seed_;
  std::vector<double> theta_;
};

// Glorot-uniform weights, zero biases, zero pad embedding row.
ModelState init_model(std::uint64_t seed, const ModelConfig& config);

// Activations kept for the backward pass.
struct ForwardCache {
  std::size_t batch_size = 0;
  std::vector<std::uint32_t> token_counts;  // [batch] non-pad tokens
  std::vector<double> pooled;               // [batch][emb]
  std::vector<double> hidden_pre;           // [batch][hidden]
  std::vector<double> dropout_mask;         // [batch][hidden], 0 or 1/(1-rate)
  std::vector<double> hidden;               // [batch][hidden]
  std::vector<double> logits;               // [batch][out]
  std::vector<double> probs;                // [batch][classes]

  double prob(std::size_t row, ClassId c) const;
};

// Eval mode when rng is null: the dropout mask is all ones.
ForwardCache forward(const ModelState& m, std::span<const FeatureVector> batch,
                     Rng* rng = nullptr);
// Train-mode forward with a caller-supplied mask ([batch][hidden]).
ForwardCache forward_with_mask(const ModelState& m, std::span<const FeatureVector> batch,
                               std::span<const double> dropout_mask);

// Mean cross-entropy of the cached predictions.
double cross_entropy(const ModelState& m, const ForwardCache& cache,
                     std::span<const ClassId> labels);

// Gradient of the mean cross-entropy; overwrites `grad` (size num_params).
void backward(const ModelState& m, const ForwardCache& cache,
              std::span<const FeatureVector> batch, std::span<const ClassId> labels,
              std::span<double> grad);
std::vector<double> backward(const ModelState& m, const ForwardCache& cache,
                             std::span<const FeatureVector> batch,
                             std::span<const ClassId> labels);

// Gradient of log p(label | x) with dropout off.
std::vector<double> log_likelihood_grad(const ModelState& m, const FeatureVector& x,
                                        ClassId label);

// Eval-mode mean loss, used by gradient checks.
double eval_loss(const ModelState& m, std::span<const FeatureVector> batch,
                 std::span<const ClassId> labels);

std::vector<ClassId> predict(const ModelState& m, std::span<const FeatureVector> features);

nlohmann::json to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelState& m);
ModelState model_from_json(const nlohmann::json& j);

}  // namespace seqtarget

#endif  // SEQTARGET_MODEL_H_
