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

#ifndef SEQTARGET_CORPUS_H_
#define SEQTARGET_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqtarget {

using ClassId = std::size_t;

struct LabeledExample {
  std::string text;
  ClassId label = 0;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

// Ordered, duplicate-free class names. Index in the list is the ClassId.
class LabelMap {
 public:
  // Throws DataError on fewer than two names or duplicates.
  explicit LabelMap(std::vector<std::string> names);

  // Sorted lexicographically; used when labels are inferred from data.
  static LabelMap from_observed(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(ClassId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<ClassId> find(std::string_view name) const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::vector<std::string> names_;
};

enum class DatasetRole { kTrain, kValidation, kTest };

std::string_view to_string(DatasetRole role);

// Immutable collection of labeled texts.
class Dataset {
 public:
  // Validates every example (non-blank text, label in range).
  Dataset(std::vector<LabeledExample> examples, LabelMap label_map,
          DatasetRole role = DatasetRole::kTrain);

  const std::vector<LabeledExample>& examples() const { return examples_; }
  const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }
  const LabelMap& label_map() const { return label_map_; }
  DatasetRole role() const { return role_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  std::size_t num_classes() const { return label_map_.size(); }

  // Per-class example counts, indexed by ClassId.
  std::vector<std::size_t> class_counts() const;
  std::vector<ClassId> labels() const;
  // Indices of the examples of each class, in dataset order.
  std::vector<std::vector<std::size_t>> indices_by_class() const;

  // Examples at `indices`, in the given order. Duplicates allowed.
  Dataset subset(std::span<const std::size_t> indices) const;
  Dataset with_role(DatasetRole role) const;

 private:
  std::vector<LabeledExample> examples_;
  LabelMap label_map_;
  DatasetRole role_;
};

// Normalized class probability vector.
class ClassDistribution {
 public:
  // Entries must be non-negative and sum to 1 within 1e-12.
  explicit ClassDistribution(std::vector<double> probs);

  static ClassDistribution uniform(std::size_t num_classes);
  static ClassDistribution from_counts(std::span<const std::size_t> counts);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t c) const { return probs_[c]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

struct ImbalanceStats {
  std::vector<std::size_t> counts;
  double rho = 1.0;  // max(counts) / min(counts)
};

// JSON-lines records {"text": ..., "label": ...}. With no label map the
// labels are inferred and sorted; with one, unknown labels raise LabelError.
Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<LabelMap>& label_map = std::nullopt,
                     DatasetRole role = DatasetRole::kTrain);
Dataset read_dataset(std::istream& in,
                     const std::optional<LabelMap>& label_map = std::nullopt,
                     DatasetRole role = DatasetRole::kTrain);
void write_dataset(std::ostream& out, const Dataset& d);
void save_dataset(const std::filesystem::path& path, const Dataset& d);

ClassDistribution class_distribution(const Dataset& d);
ImbalanceStats imbalance_ratio(const Dataset& d);
ImbalanceStats imbalance_ratio(std::span<const std::size_t> counts);

// KL(target || q) in nats. Throws DataError("infinite divergence") when q has
// no mass on a class that target supports.
double kl_divergence(const ClassDistribution& target, const ClassDistribution& q);

struct SimulationConfig {
  double rho = 1.0;
  std::size_t majority_count = 0;
  // Classes drawn down to round(majority_count / rho). Empty selects the
  // first label of the map.
  std::vector<std::string> minority_classes;
};

// Subsamples `d` without replacement into a train set with the configured
// imbalance. Selected examples keep their relative order from `d`.
Dataset simulate_imbalance(const Dataset& d, const SimulationConfig& cfg,
                           std::uint64_t seed);

}  // namespace seqtarget

#endif  // SEQTARGET_CORPUS_H_
