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

#ifndef SEQTARGET_PARTITION_H_
#define SEQTARGET_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqtarget/corpus.h"

namespace seqtarget {

// Class distribution the final split should match. Uniform for the
// imbalance use case.
struct TargetDistribution {
  ClassDistribution dist;

  static TargetDistribution uniform(std::size_t num_classes) {
    return {ClassDistribution::uniform(num_classes)};
  }
};

struct SplitConfig {
  std::size_t k = 2;
  // Relative minority allotment per split; empty means all ones.
  std::vector<std::size_t> eta;
  std::optional<TargetDistribution> target;  // uniform when unset

  void validate() const;
};

using IndexSet = std::vector<std::size_t>;

// Ordered task sequence over a train set. splits[0] is trained first.
struct SplitPlan {
  std::size_t num_examples = 0;
  std::vector<IndexSet> splits;
  std::vector<double> kls;  // KL(target || split distribution) per split
  // Set when the plan degraded to a single task (input already on target).
  std::optional<std::string> advisory;
};

// Builds a k-task plan whose splits approach the target. Each class of the
// final split holds floor(m * eta[k] / sum(eta)) examples, where m is the
// smallest class count; splits before it keep progressively more of the
// majority surplus, interpolated geometrically. Selection within a class
// is a seeded pseudo-random ranking keyed on example text, so the plan
// depends on labels, texts and seed but not on row order.
//
// Throws DataError when a class has fewer than k examples and OrderingError
// if the interpolated splits are not strictly decreasing in KL. Input that
// already matches the target yields a one-split plan with an advisory.
SplitPlan plan_splits(const Dataset& d, const SplitConfig& cfg,
                      std::uint64_t seed);

// Stable sort by KL to target, descending.
std::vector<IndexSet> sort_splits(std::vector<IndexSet> splits, const Dataset& d,
                                  const TargetDistribution& target);

double split_kl(const IndexSet& split, const Dataset& d,
                const TargetDistribution& target);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;  // "disjointness", "coverage", "ordering"
  bool final_matches_target = false;     // last KL <= 1e-9
};

ValidationReport validate_sequence(const SplitPlan& plan);

nlohmann::json to_json(const SplitPlan& plan);
SplitPlan split_plan_from_json(const nlohmann::json& j);

}  // namespace seqtarget

#endif  // SEQTARGET_PARTITION_H_
