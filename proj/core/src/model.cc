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
#include <string>

#include <nlohmann/json.hpp>

#include "seqtarget/errors.h"

namespace seqtarget {
namespace {

constexpr int kCheckpointVersion = 1;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void fill_uniform(std::span<double> values, double scale, Rng& rng) {
  for (double& v : values) v = uniform_real(rng, -scale, scale);
}

double glorot(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void check_batch(const ModelState& m, std::span<const FeatureVector> batch) {
  const auto vocab = m.config().vocab_size;
  for (const auto& x : batch) {
    for (TokenId t : x.ids) {
      if (t >= vocab) {
        throw DataError("token id " + std::to_string(t) + " outside vocabulary of " +
                        std::to_string(vocab));
      }
    }
  }
}

template <typename MaskFn>
ForwardCache run_forward(const ModelState& m, std::span<const FeatureVector> batch,
                         MaskFn&& mask_value) {
  check_batch(m, batch);
  const auto& cfg = m.config();
  const auto& lay = m.layout();
  const std::size_t B = batch.size();
  const std::size_t E = cfg.embedding_dim;
  const std::size_t H = cfg.hidden_dim;
  const std::size_t O = cfg.out_dim();
  const std::size_t C = cfg.num_classes;
  const auto theta = m.params();

  ForwardCache cache;
  cache.batch_size = B;
  cache.token_counts.assign(B, 0);
  cache.pooled.assign(B * E, 0.0);
  cache.hidden_pre.assign(B * H, 0.0);
  cache.dropout_mask.assign(B * H, 1.0);
  cache.hidden.assign(B * H, 0.0);
  cache.logits.assign(B * O, 0.0);
  cache.probs.assign(B * C, 0.0);

  for (std::size_t b = 0; b < B; ++b) {
    double* pooled = &cache.pooled[b * E];
    std::uint32_t n = 0;
    for (TokenId t : batch[b].ids) {
      if (t == kPadToken) continue;
      const double* row = &theta[lay.embedding + t * E];
      for (std::size_t e = 0; e < E; ++e) pooled[e] += row[e];
      ++n;
    }
    cache.token_counts[b] = n;
    if (n > 0) {
      for (std::size_t e = 0; e < E; ++e) pooled[e] /= n;
    }

    double* pre = &cache.hidden_pre[b * H];
    for (std::size_t h = 0; h < H; ++h) pre[h] = theta[lay.hidden_bias + h];
    for (std::size_t e = 0; e < E; ++e) {
      const double x = pooled[e];
      if (x == 0.0) continue;
      const double* w = &theta[lay.hidden_weights + e * H];
      for (std::size_t h = 0; h < H; ++h) pre[h] += x * w[h];
    }
    double* mask = &cache.dropout_mask[b * H];
    double* hid = &cache.hidden[b * H];
    for (std::size_t h = 0; h < H; ++h) {
      mask[h] = mask_value(b * H + h);
      hid[h] = std::max(pre[h], 0.0) * mask[h];
    }

    double* z = &cache.logits[b * O];
    for (std::size_t o = 0; o < O; ++o) z[o] = theta[lay.output_bias + o];
    for (std::size_t h = 0; h < H; ++h) {
      if (hid[h] == 0.0) continue;
      const double* w = &theta[lay.output_weights + h * O];
      for (std::size_t o = 0; o < O; ++o) z[o] += hid[h] * w[o];
    }

    double* p = &cache.probs[b * C];
    if (O == 1) {
      p[1] = sigmoid(z[0]);
      p[0] = 1.0 - p[1];
    } else {
      const double zmax = *std::max_element(z, z + O);
      double total = 0.0;
      for (std::size_t o = 0; o < O; ++o) {
        p[o] = std::exp(z[o] - zmax);
        total += p[o];
      }
      for (std::size_t o = 0; o < O; ++o) p[o] /= total;
    }
  }
  return cache;
}

}  // namespace

std::size_t ModelConfig::num_params() const { return ParamLayout::of(*this).total; }

void ModelConfig::validate() const {
  if (vocab_size < 2 || embedding_dim == 0 || hidden_dim == 0) {
    throw ConfigError("model dimensions must be positive (vocab >= 2)");
  }
  if (num_classes < 2) throw ConfigError("model needs at least two classes");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must be in [0, 1)");
}

ParamLayout ParamLayout::of(const ModelConfig& cfg) {
  ParamLayout lay;
  lay.embedding = 0;
  lay.hidden_weights = lay.embedding + cfg.vocab_size * cfg.embedding_dim;
  lay.hidden_bias = lay.hidden_weights + cfg.embedding_dim * cfg.hidden_dim;
  lay.output_weights = lay.hidden_bias + cfg.hidden_dim;
  lay.output_bias = lay.output_weights + cfg.hidden_dim * cfg.out_dim();
  lay.total = lay.output_bias + cfg.out_dim();
  return lay;
}

ModelState::ModelState(ModelConfig config, std::uint64_t seed)
    : config_(config),
      layout_(ParamLayout::of(config)),
      seed_(seed),
      theta_(layout_.total, 0.0) {
  config_.validate();
}

ModelState init_model(std::uint64_t seed, const ModelConfig& config) {
  ModelState m(config, seed);
  Rng rng(seed);
  const auto& c = m.config();
  auto emb = m.embedding();
  fill_uniform(emb.subspan(c.embedding_dim), glorot(c.vocab_size, c.embedding_dim), rng);
  fill_uniform(m.hidden_weights(), glorot(c.embedding_dim, c.hidden_dim), rng);
  fill_uniform(m.output_weights(), glorot(c.hidden_dim, c.out_dim()), rng);
  return m;
}

double ForwardCache::prob(std::size_t row, ClassId c) const {
  return probs[row * (probs.size() / batch_size) + c];
}

ForwardCache forward(const ModelState& m, std::span<const FeatureVector> batch, Rng* rng) {
  const double rate = m.config().dropout;
  if (rng == nullptr || rate == 0.0) {
    return run_forward(m, batch, [](std::size_t) { return 1.0; });
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  return run_forward(m, batch, [&](std::size_t) {
    return uniform_unit(*rng) < rate ? 0.0 : keep_scale;
  });
}

ForwardCache forward_with_mask(const ModelState& m, std::span<const FeatureVector> batch,
                               std::span<const double> dropout_mask) {
  if (dropout_mask.size() != batch.size() * m.config().hidden_dim) {
    throw DataError("dropout mask size mismatch");
  }
  return run_forward(m, batch, [&](std::size_t i) { return dropout_mask[i]; });
}

double cross_entropy(const ModelState& m, const ForwardCache& cache,
                     std::span<const ClassId> labels) {
  if (labels.size() != cache.batch_size) throw DataError("label count mismatch");
  if (labels.empty()) return 0.0;
  const std::size_t O = m.config().out_dim();
  double total = 0.0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    const double* z = &cache.logits[b * O];
    if (O == 1) {
      total += softplus(z[0]) - (labels[b] == 1 ? z[0] : 0.0);
    } else {
      const double zmax = *std::max_element(z, z + O);
      double sum = 0.0;
      for (std::size_t o = 0; o < O; ++o) sum += std::exp(z[o] - zmax);
      total += zmax + std::log(sum) - z[labels[b]];
    }
  }
  return total / static_cast<double>(labels.size());
}

void backward(const ModelState& m, const ForwardCache& cache,
              std::span<const FeatureVector> batch, std::span<const ClassId> labels,
              std::span<double> grad) {
  const auto& cfg = m.config();
  const auto& lay = m.layout();
  if (grad.size() != m.num_params()) {
    throw DataError("gradient buffer has " + std::to_string(grad.size()) +
                    " entries, model has " + std::to_string(m.num_params()));
  }
  if (batch.size() != cache.batch_size || labels.size() != cache.batch_size) {
    throw DataError("batch size mismatch between cache, batch and labels");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  const std::size_t B = batch.size();
  if (B == 0) return;
  const std::size_t E = cfg.embedding_dim;
  const std::size_t H = cfg.hidden_dim;
  const std::size_t O = cfg.out_dim();
  const double inv_b = 1.0 / static_cast<double>(B);
  const auto theta = m.params();

  std::vector<double> dz(O);
  std::vector<double> dh(H);
  std::vector<double> dpooled(E);
  for (std::size_t b = 0; b < B; ++b) {
    if (labels[b] >= cfg.num_classes) throw DataError("label out of range");
    if (O == 1) {
      dz[0] = (cache.probs[b * 2 + 1] - (labels[b] == 1 ? 1.0 : 0.0)) * inv_b;
    } else {
      for (std::size_t o = 0; o < O; ++o) {
        dz[o] = (cache.probs[b * O + o] - (labels[b] == o ? 1.0 : 0.0)) * inv_b;
      }
    }

    const double* hid = &cache.hidden[b * H];
    for (std::size_t o = 0; o < O; ++o) grad[lay.output_bias + o] += dz[o];
    for (std::size_t h = 0; h < H; ++h) {
      const double* w = &theta[lay.output_weights + h * O];
      double* gw = &grad[lay.output_weights + h * O];
      double acc = 0.0;
      for (std::size_t o = 0; o < O; ++o) {
        gw[o] += hid[h] * dz[o];
        acc += w[o] * dz[o];
      }
      const double pre = cache.hidden_pre[b * H + h];
      dh[h] = pre > 0.0 ? acc * cache.dropout_mask[b * H + h] : 0.0;
    }

    const double* pooled = &cache.pooled[b * E];
    for (std::size_t h = 0; h < H; ++h) grad[lay.hidden_bias + h] += dh[h];
    for (std::size_t e = 0; e < E; ++e) {
      const double* w = &theta[lay.hidden_weights + e * H];
      double* gw = &grad[lay.hidden_weights + e * H];
      double acc = 0.0;
      for (std::size_t h = 0; h < H; ++h) {
        gw[h] += pooled[e] * dh[h];
        acc += w[h] * dh[h];
      }
      dpooled[e] = acc;
    }

    const std::uint32_t n = cache.token_counts[b];
    if (n == 0) continue;
    const double share = 1.0 / n;
    for (TokenId t : batch[b].ids) {
      if (t == kPadToken) continue;
      double* g = &grad[lay.embedding + t * E];
      for (std::size_t e = 0; e < E; ++e) g[e] += dpooled[e] * share;
    }
  }
}

std::vector<double> backward(const ModelState& m, const ForwardCache& cache,
                             std::span<const FeatureVector> batch,
                             std::span<const ClassId> labels) {
  std::vector<double> grad(m.num_params());
  backward(m, cache, batch, labels, grad);
  return grad;
}

std::vector<double> log_likelihood_grad(const ModelState& m, const FeatureVector& x,
                                        ClassId label) {
  const std::span<const FeatureVector> one(&x, 1);
  const std::span<const ClassId> y(&label, 1);
  const auto cache = forward(m, one);
  auto grad = backward(m, cache, one, y);
  for (double& g : grad) g = -g;
  return grad;
}

double eval_loss(const ModelState& m, std::span<const FeatureVector> batch,
                 std::span<const ClassId> labels) {
  return cross_entropy(m, forward(m, batch), labels);
}

std::vector<ClassId> predict(const ModelState& m, std::span<const FeatureVector> features) {
  constexpr std::size_t kChunk = 256;
  std::vector<ClassId> out;
  out.reserve(features.size());
  const std::size_t C = m.config().num_classes;
  for (std::size_t start = 0; start < features.size(); start += kChunk) {
    const auto chunk = features.subspan(start, std::min(kChunk, features.size() - start));
    const auto cache = forward(m, chunk);
    for (std::size_t b = 0; b < chunk.size(); ++b) {
      const double* p = &cache.probs[b * C];
      out.push_back(static_cast<ClassId>(std::max_element(p, p + C) - p));
    }
  }
  return out;
}

nlohmann::json to_json(const ModelConfig& cfg) {
  return {{"vocab_size", cfg.vocab_size},   {"embedding_dim", cfg.embedding_dim},
          {"hidden_dim", cfg.hidden_dim},   {"num_classes", cfg.num_classes},
          {"dropout", cfg.dropout}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.vocab_size = j.at("vocab_size").get<std::size_t>();
  cfg.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  cfg.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  cfg.num_classes = j.at("num_classes").get<std::size_t>();
  cfg.dropout = j.at("dropout").get<double>();
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const ModelState& m) {
  return {{"format", "seqtarget.model"},
          {"version", kCheckpointVersion},
          {"config", to_json(m.config())},
          {"seed", m.seed()},
          {"theta", m.params()}};
}

ModelState model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "seqtarget.model") {
      throw ParseError("not a seqtarget model checkpoint", 0);
    }
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw ParseError("unsupported checkpoint version " + std::to_string(version), 0);
    }
    ModelState m(model_config_from_json(j.at("config")), j.at("seed").get<std::uint64_t>());
    const auto theta = j.at("theta").get<std::vector<double>>();
    if (theta.size() != m.num_params()) {
      throw ParseError("checkpoint has " + std::to_string(theta.size()) +
                           " parameters, config implies " + std::to_string(m.num_params()),
                       0);
    }
    std::copy(theta.begin(), theta.end(), m.params().begin());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad checkpoint: ") + e.what(), 0);
  }
}

}  // namespace seqtarget
