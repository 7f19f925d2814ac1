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

#ifndef SEQTARGET_METRICS_H_
#define SEQTARGET_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "seqtarget/corpus.h"

namespace seqtarget {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes)
      : p_(num_classes), cells_(num_classes * num_classes, 0) {}

  std::size_t num_classes() const { return p_; }
  std::size_t at(ClassId truth, ClassId predicted) const {
    return cells_[truth * p_ + predicted];
  }
  void add(ClassId truth, ClassId predicted) { ++cells_[truth * p_ + predicted]; }
  std::size_t total() const;

  std::size_t true_positives(ClassId c) const { return at(c, c); }
  std::size_t false_positives(ClassId c) const;
  std::size_t false_negatives(ClassId c) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t p_;
  std::vector<std::size_t> cells_;
};

ConfusionMatrix confusion(std::span<const ClassId> labels,
                          std::span<const ClassId> predictions, std::size_t num_classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  // Filled for binary problems when a positive class is given.
  std::optional<ClassMetrics> positive;

  // Positive-class numbers when available, macro averages otherwise.
  ClassMetrics headline() const;
};

// Zero denominators give 0 for precision, recall and F1, and such classes
// still count toward the macro mean.
MetricsReport report(const ConfusionMatrix& cm,
                     std::optional<ClassId> positive_class = std::nullopt);

}  // namespace seqtarget

#endif  // SEQTARGET_METRICS_H_
