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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "seqtarget/errors.h"
#include "seqtarget/random.h"

namespace seqtarget {
namespace {

using testing::kMetricTol;
using testing::tally_metrics;

TEST(ConfusionTest, Examples) {
  const std::vector<ClassId> y = {0, 1};
  const auto perfect = confusion(y, y, 2);
  EXPECT_EQ(perfect.at(0, 0), 1u);
  EXPECT_EQ(perfect.at(1, 1), 1u);
  EXPECT_EQ(perfect.at(0, 1) + perfect.at(1, 0), 0u);

  const std::vector<ClassId> zeros = {0, 0}, ones = {1, 1};
  const auto miss = confusion(zeros, ones, 2);
  EXPECT_EQ(miss.at(0, 1), 2u);
  EXPECT_EQ(miss.at(0, 0) + miss.at(1, 1) + miss.at(1, 0), 0u);
  EXPECT_EQ(miss.total(), 2u);
}

TEST(ConfusionTest, Errors) {
  const std::vector<ClassId> a = {0, 1, 1}, b = {0, 1};
  EXPECT_THROW(confusion(a, b, 2), DataError);
  const std::vector<ClassId> out_of_range = {0, 2, 1};
  EXPECT_THROW(confusion(a, out_of_range, 2), DataError);
}

TEST(ReportTest, WorkedExample) {
  // Class 1: TP=2, FP=1, FN=2.
  const std::vector<ClassId> y = {1, 1, 1, 1, 0, 0};
  const std::vector<ClassId> p = {1, 1, 0, 0, 1, 0};
  const auto r = report(confusion(y, p, 2), ClassId{1});
  ASSERT_TRUE(r.positive);
  EXPECT_NEAR(r.positive->precision, 2.0 / 3.0, kMetricTol);
  EXPECT_NEAR(r.positive->recall, 0.5, kMetricTol);
  EXPECT_NEAR(r.positive->f1, 4.0 / 7.0, kMetricTol);
  EXPECT_NEAR(r.positive->f1, 0.5714, 1e-4);
  EXPECT_NEAR(r.headline().f1, 4.0 / 7.0, kMetricTol);
}

TEST(ReportTest, PerfectPredictions) {
  const std::vector<ClassId> y = {0, 2, 1, 2, 0};
  const auto r = report(confusion(y, y, 3));
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.macro_f1, 1.0);
  for (const auto& c : r.per_class) {
    EXPECT_EQ(c.precision, 1.0);
    EXPECT_EQ(c.recall, 1.0);
    EXPECT_EQ(c.f1, 1.0);
  }
  EXPECT_FALSE(r.positive);
}

TEST(ReportTest, AbsentClassCountsAsZero) {
  // Class 2 is neither true nor predicted.
  const std::vector<ClassId> y = {0, 1, 0, 1};
  const auto r = report(confusion(y, y, 3));
  EXPECT_EQ(r.per_class[2].precision, 0.0);
  EXPECT_EQ(r.per_class[2].recall, 0.0);
  EXPECT_EQ(r.per_class[2].f1, 0.0);
  EXPECT_NEAR(r.macro_f1, 2.0 / 3.0, kMetricTol);
}

TEST(ReportTest, CollapsedBaseline) {
  const std::vector<ClassId> y = {0, 0, 0, 1};
  const std::vector<ClassId> p = {0, 0, 0, 0};
  const auto r = report(confusion(y, p, 2), ClassId{1});
  EXPECT_EQ(r.positive->precision, 0.0);
  EXPECT_EQ(r.positive->recall, 0.0);
  EXPECT_EQ(r.positive->f1, 0.0);
  EXPECT_EQ(r.headline().f1, 0.0);
  EXPECT_THROW(report(confusion(y, p, 2), ClassId{2}), DataError);
}

TEST(ReportTest, HeadlineFallsBackToMacro) {
  const std::vector<ClassId> y = {0, 1, 2}, p = {0, 2, 2};
  const auto r = report(confusion(y, p, 3), ClassId{1});
  EXPECT_FALSE(r.positive);
  EXPECT_EQ(r.headline().f1, r.macro_f1);
  EXPECT_EQ(r.headline().precision, r.macro_precision);
}

TEST(ReportTest, FuzzAgainstTally) {
  Rng rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t p = std::vector<std::size_t>{2, 3, 5}[trial % 3];
    std::vector<ClassId> y(1000), yhat(1000);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = uniform_index(rng, p);
      yhat[i] = uniform_unit(rng) < 0.6 ? y[i] : uniform_index(rng, p);
    }
    const auto r = report(confusion(y, yhat, p));
    const auto t = tally_metrics(y, yhat, p);
    for (ClassId c = 0; c < p; ++c) {
      EXPECT_NEAR(r.per_class[c].precision, t.precision[c], kMetricTol);
      EXPECT_NEAR(r.per_class[c].recall, t.recall[c], kMetricTol);
      EXPECT_NEAR(r.per_class[c].f1, t.f1[c], kMetricTol);
      // Harmonic-mean bounds.
      const auto& m = r.per_class[c];
      EXPECT_GE(m.f1, std::min(m.precision, m.recall) - kMetricTol);
      EXPECT_LE(m.f1, std::max(m.precision, m.recall) + kMetricTol);
    }
    EXPECT_NEAR(r.macro_f1, t.macro_f1, kMetricTol);
    EXPECT_NEAR(r.accuracy, t.accuracy, kMetricTol);
  }
}

TEST(ReportTest, MacroF1InvariantUnderRelabeling) {
  Rng rng(5);
  const std::size_t p = 5;
  std::vector<ClassId> y(400), yhat(400);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = uniform_index(rng, p);
    yhat[i] = uniform_index(rng, p);
  }
  std::vector<ClassId> perm(p);
  std::iota(perm.begin(), perm.end(), ClassId{0});
  const double base = report(confusion(y, yhat, p)).macro_f1;
  for (int round = 0; round < 20; ++round) {
    shuffle(std::span(perm), rng);
    std::vector<ClassId> y2(y.size()), yhat2(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      y2[i] = perm[y[i]];
      yhat2[i] = perm[yhat[i]];
    }
    EXPECT_NEAR(report(confusion(y2, yhat2, p)).macro_f1, base, 1e-15);
  }
}

}  // namespace
}  // namespace seqtarget
