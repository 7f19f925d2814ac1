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

#include "seqtarget/metrics.h"

#include <numeric>

#include "seqtarget/errors.h"

namespace seqtarget {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::false_positives(ClassId c) const {
  std::size_t n = 0;
  for (ClassId t = 0; t < p_; ++t) {
    if (t != c) n += at(t, c);
  }
  return n;
}

std::size_t ConfusionMatrix::false_negatives(ClassId c) const {
  std::size_t n = 0;
  for (ClassId q = 0; q < p_; ++q) {
    if (q != c) n += at(c, q);
  }
  return n;
}

ConfusionMatrix confusion(std::span<const ClassId> labels,
                          std::span<const ClassId> predictions, std::size_t num_classes) {
  if (labels.size() != predictions.size()) {
    throw DataError("confusion: " + std::to_string(labels.size()) + " labels vs " +
                    std::to_string(predictions.size()) + " predictions");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= num_classes || predictions[i] >= num_classes) {
      throw DataError("confusion: class id out of range at position " + std::to_string(i));
    }
    cm.add(labels[i], predictions[i]);
  }
  return cm;
}

ClassMetrics MetricsReport::headline() const {
  if (positive) return *positive;
  return {macro_precision, macro_recall, macro_f1};
}

MetricsReport report(const ConfusionMatrix& cm, std::optional<ClassId> positive_class) {
  const std::size_t p = cm.num_classes();
  MetricsReport r;
  r.per_class.resize(p);
  std::size_t correct = 0;
  for (ClassId c = 0; c < p; ++c) {
    const std::size_t tp = cm.true_positives(c);
    correct += tp;
    auto& m = r.per_class[c];
    m.precision = ratio(tp, tp + cm.false_positives(c));
    m.recall = ratio(tp, tp + cm.false_negatives(c));
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
  }
  if (p > 0) {
    r.macro_precision /= static_cast<double>(p);
    r.macro_recall /= static_cast<double>(p);
    r.macro_f1 /= static_cast<double>(p);
  }
  r.accuracy = ratio(correct, cm.total());
  if (positive_class && p == 2) {
    if (*positive_class >= p) throw DataError("positive class out of range");
    r.positive = r.per_class[*positive_class];
  }
  return r;
}

}  // namespace seqtarget
