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

#ifndef SEQTARGET_TRAINER_H_
#define SEQTARGET_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqtarget/featurizer.h"
#include "seqtarget/metrics.h"
#include "seqtarget/model.h"
#include "seqtarget/partition.h"

namespace seqtarget {

// Quadratic pull toward the previous task's optimum, weighted per parameter
// by the diagonal Fisher information.
struct EwcAnchor {
  std::vector<double> theta_star;
  std::vector<double> fisher;
  double lambda = 0.0;

  void validate(std::size_t num_params) const;
};

struct PenaltyResult {
  double value = 0.0;
  std::vector<double> gradient;
};

// value = sum_i lambda/2 * F_i * (theta_i - theta*_i)^2,
// gradient_i = lambda * F_i * (theta_i - theta*_i).
PenaltyResult ewc_penalty(std::span<const double> theta, const EwcAnchor& anchor);
// Adds the penalty gradient into `grad` and returns the penalty value.
double add_ewc_penalty(std::span<const double> theta, const EwcAnchor& anchor,
                       std::span<double> grad);

// Empirical Fisher diagonal: mean squared log-likelihood gradient (true
// labels, dropout off) over at most `cap` examples drawn without
// replacement under `seed`.
std::vector<double> fisher_diagonal(const ModelState& m, const EncodedDataset& d,
                                    std::size_t cap, std::uint64_t seed);

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  double learning_rate = 0.1;
  double lambda = 1000.0;
  std::size_t fisher_sample_cap = 1000;
  std::uint64_t seed = 0;
  // Reported in history as val_f1; selection always uses macro-F1.
  std::optional<ClassId> positive_class;

  void validate() const;
};

struct EpochRecord {
  std::size_t task = 0;
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double penalty = 0.0;
  double val_macro_f1 = 0.0;
  double val_f1 = 0.0;  // positive-class F1 when configured, else macro

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TaskResult {
  ModelState best;
  std::size_t best_epoch = 0;
  MetricsReport best_val;
  std::vector<EpochRecord> history;
};

// Mini-batch SGD on cross-entropy. With an anchor, each step also applies
// the EWC penalty in closed form: theta_i <- (theta_i - lr*g_i +
// s_i*theta*_i) / (1 + s_i), s_i = lr*lambda*F_i. That is the exact
// minimizer of the linearized loss plus penalty, so large lambda*F cannot
// make the update diverge; lambda = 0 reduces it to the plain SGD step.
// Returns the epoch snapshot with the highest validation macro-F1, earliest
// on ties. Throws TrainingError on a non-finite loss.
TaskResult train_task(ModelState m, const EncodedDataset& train,
                      const EncodedDataset& val, const TrainConfig& cfg,
                      const EwcAnchor* anchor = nullptr, std::size_t task_index = 0);

// Seed used for task i of a sequential run. Task 0 uses the base seed.
std::uint64_t task_seed(std::uint64_t base, std::size_t task_index);

struct SequentialResult {
  ModelState final_model;
  MetricsReport final_val;
  // anchors[i] holds theta*_i and the Fisher of task i at theta*_i.
  std::vector<EwcAnchor> anchors;
  std::vector<EpochRecord> history;
};

// Trains tasks in order; task i > 0 is anchored to anchors[i - 1].
SequentialResult sequential_train(ModelState m0, std::span<const EncodedDataset> tasks,
                                  const EncodedDataset& val, const TrainConfig& cfg);
SequentialResult sequential_train(ModelState m0, const SplitPlan& plan,
                                  const EncodedDataset& d, const EncodedDataset& val,
                                  const TrainConfig& cfg);

// Rows of `d` at `indices`.
EncodedDataset take(const EncodedDataset& d, std::span<const std::size_t> indices);

// sum_i F_i * (theta_i - theta*_i)^2
double fisher_weighted_drift(std::span<const double> theta, const EwcAnchor& anchor);

nlohmann::json to_json(const EpochRecord& r);
nlohmann::json to_json(const EwcAnchor& a);

}  // namespace seqtarget

#endif  // SEQTARGET_TRAINER_H_
