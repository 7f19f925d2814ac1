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

#include "seqtarget/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seqtarget/errors.h"
#include "seqtarget/random.h"

namespace seqtarget {

void EwcAnchor::validate(std::size_t num_params) const {
  if (theta_star.size() != num_params || fisher.size() != num_params) {
    throw DataError("EWC anchor length mismatch: theta* " +
                    std::to_string(theta_star.size()) + ", fisher " +
                    std::to_string(fisher.size()) + ", params " +
                    std::to_string(num_params));
  }
  if (!(lambda >= 0.0)) throw ConfigError("EWC lambda must be >= 0");
}

double add_ewc_penalty(std::span<const double> theta, const EwcAnchor& anchor,
                       std::span<double> grad) {
  anchor.validate(theta.size());
  if (grad.size() != theta.size()) throw DataError("EWC gradient buffer length mismatch");
  double value = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double weighted = anchor.lambda * anchor.fisher[i];
    const double diff = theta[i] - anchor.theta_star[i];
    value += 0.5 * weighted * diff * diff;
    grad[i] += weighted * diff;
  }
  return value;
}

PenaltyResult ewc_penalty(std::span<const double> theta, const EwcAnchor& anchor) {
  PenaltyResult r;
  r.gradient.assign(theta.size(), 0.0);
  r.value = add_ewc_penalty(theta, anchor, r.gradient);
  return r;
}

double fisher_weighted_drift(std::span<const double> theta, const EwcAnchor& anchor) {
  anchor.validate(theta.size());
  double drift = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double diff = theta[i] - anchor.theta_star[i];
    drift += anchor.fisher[i] * diff * diff;
  }
  return drift;
}

std::vector<double> fisher_diagonal(const ModelState& m, const EncodedDataset& d,
                                    std::size_t cap, std::uint64_t seed) {
  if (d.empty()) throw DataError("fisher_diagonal: empty dataset");
  if (cap == 0) throw ConfigError("fisher_diagonal: cap must be positive");
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (rows.size() > cap) {
    Rng rng(seed);
    shuffle(std::span(rows), rng);
    rows.resize(cap);
    std::sort(rows.begin(), rows.end());
  }
  std::vector<double> fisher(m.num_params(), 0.0);
  for (std::size_t r : rows) {
    const auto g = log_likelihood_grad(m, d.features[r], d.labels[r]);
    for (std::size_t i = 0; i < g.size(); ++i) fisher[i] += g[i] * g[i];
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& f : fisher) f *= inv;
  return fisher;
}

void TrainConfig::validate() const {
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (fisher_sample_cap == 0) throw ConfigError("fisher_sample_cap must be positive");
}

EncodedDataset take(const EncodedDataset& d, std::span<const std::size_t> indices) {
  EncodedDataset out;
  out.num_classes = d.num_classes;
  out.features.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    out.features.push_back(d.features.at(i));
    out.labels.push_back(d.labels.at(i));
  }
  return out;
}

namespace {

double ewc_value(std::span<const double> theta, const EwcAnchor& anchor) {
  double value = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double diff = theta[i] - anchor.theta_star[i];
    value += 0.5 * anchor.lambda * anchor.fisher[i] * diff * diff;
  }
  return value;
}

MetricsReport evaluate(const ModelState& m, const EncodedDataset& d,
                       std::optional<ClassId> positive_class) {
  const auto predictions = predict(m, d.features);
  return report(confusion(d.labels, predictions, d.num_classes), positive_class);
}

}  // namespace

TaskResult train_task(ModelState m, const EncodedDataset& train,
                      const EncodedDataset& val, const TrainConfig& cfg,
                      const EwcAnchor* anchor, std::size_t task_index) {
  cfg.validate();
  if (train.empty()) throw DataError("train_task: empty training set");
  if (val.empty()) throw DataError("train_task: empty validation set");
  if (anchor) anchor->validate(m.num_params());

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad(m.num_params());
  std::vector<FeatureVector> batch;
  std::vector<ClassId> labels;

  std::optional<TaskResult> best;
  std::vector<EpochRecord> history;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle(std::span(order), rng);
    double loss_sum = 0.0;
    double penalty_sum = 0.0;
    std::size_t num_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      labels.clear();
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(train.features[order[i]]);
        labels.push_back(train.labels[order[i]]);
      }
      const auto cache = forward(m, batch, &rng);
      const double loss = cross_entropy(m, cache, labels);
      backward(m, cache, batch, labels, grad);
      const double penalty = anchor ? ewc_value(m.params(), *anchor) : 0.0;
      if (!std::isfinite(loss) || !std::isfinite(penalty)) {
        std::ostringstream msg;
        msg << "non-finite loss in task " << task_index << ", epoch " << epoch
            << ", batch " << num_batches << ": loss=" << loss << " penalty=" << penalty;
        throw TrainingError(msg.str());
      }
      const auto theta = m.params();
      const double lr = cfg.learning_rate;
      if (anchor) {
        // Explicit step on the data loss, implicit (proximal) step on the
        // quadratic penalty: stable for any lr * lambda * F.
        for (std::size_t i = 0; i < theta.size(); ++i) {
          const double stiffness = lr * anchor->lambda * anchor->fisher[i];
          theta[i] = (theta[i] - lr * grad[i] + stiffness * anchor->theta_star[i]) /
                     (1.0 + stiffness);
        }
      } else {
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= lr * grad[i];
      }
      loss_sum += loss;
      penalty_sum += penalty;
      ++num_batches;
    }

    const auto val_report = evaluate(m, val, cfg.positive_class);
    EpochRecord record;
    record.task = task_index;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(num_batches);
    record.penalty = penalty_sum / static_cast<double>(num_batches);
    record.val_macro_f1 = val_report.macro_f1;
    record.val_f1 = val_report.headline().f1;
    history.push_back(record);

    if (!best || val_report.macro_f1 > best->best_val.macro_f1) {
      best = TaskResult{m, epoch, val_report, {}};
    }
  }
  best->history = std::move(history);
  return std::move(*best);
}

std::uint64_t task_seed(std::uint64_t base, std::size_t task_index) {
  return task_index == 0 ? base : derive_seed(base, task_index);
}

SequentialResult sequential_train(ModelState m0, std::span<const EncodedDataset> tasks,
                                  const EncodedDataset& val, const TrainConfig& cfg) {
  if (tasks.empty()) throw DataError("sequential_train: no tasks");
  SequentialResult out{std::move(m0), {}, {}, {}};
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    TrainConfig task_cfg = cfg;
    task_cfg.seed = task_seed(cfg.seed, i);
    const EwcAnchor* anchor = i == 0 ? nullptr : &out.anchors.back();
    auto result = [&] {
      try {
        return train_task(std::move(out.final_model), tasks[i], val, task_cfg, anchor, i);
      } catch (const Error& e) {
        throw TrainingError("task " + std::to_string(i + 1) + ": " + e.what());
      }
    }();
    EwcAnchor next;
    next.lambda = cfg.lambda;
    next.theta_star.assign(result.best.params().begin(), result.best.params().end());
    next.fisher = fisher_diagonal(result.best, tasks[i], cfg.fisher_sample_cap,
                                  derive_seed(task_cfg.seed, 0xf15e));
    out.anchors.push_back(std::move(next));
    out.history.insert(out.history.end(), result.history.begin(), result.history.end());
    out.final_val = std::move(result.best_val);
    out.final_model = std::move(result.best);
  }
  return out;
}

SequentialResult sequential_train(ModelState m0, const SplitPlan& plan,
                                  const EncodedDataset& d, const EncodedDataset& val,
                                  const TrainConfig& cfg) {
  const auto check = validate_sequence(plan);
  if (!check.ok) {
    std::string what = "sequential_train: invalid split plan:";
    for (const auto& v : check.violations) what += " " + v;
    throw DataError(what);
  }
  if (plan.num_examples != d.size()) {
    throw DataError("sequential_train: plan covers " + std::to_string(plan.num_examples) +
                    " examples, dataset has " + std::to_string(d.size()));
  }
  std::vector<EncodedDataset> tasks;
  tasks.reserve(plan.splits.size());
  for (const auto& split : plan.splits) tasks.push_back(take(d, split));
  return sequential_train(std::move(m0), tasks, val, cfg);
}

nlohmann::json to_json(const EpochRecord& r) {
  return {{"task", r.task},
          {"epoch", r.epoch},
          {"train_loss", r.train_loss},
          {"penalty", r.penalty},
          {"val_macro_f1", r.val_macro_f1},
          {"val_f1", r.val_f1}};
}

nlohmann::json to_json(const EwcAnchor& a) {
  return {{"lambda", a.lambda}, {"theta_star", a.theta_star}, {"fisher", a.fisher}};
}

}  // namespace seqtarget
