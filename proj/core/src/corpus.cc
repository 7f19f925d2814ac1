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

#include "seqtarget/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "seqtarget/errors.h"
#include "seqtarget/random.h"

namespace seqtarget {
namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' ||
           ch == '\f' || ch == '\v';
  });
}

constexpr std::string_view kUtf8Bom = "\xEF\xBB\xBF";

}  // namespace

LabelMap::LabelMap(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) {
    throw DataError("label map needs at least two classes, got " +
                    std::to_string(names_.size()));
  }
  std::set<std::string_view> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) {
      throw DataError("duplicate class name '" + name + "'");
    }
  }
}

LabelMap LabelMap::from_observed(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return LabelMap(std::move(names));
}

std::optional<ClassId> LabelMap::find(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<ClassId>(it - names_.begin());
}

std::string_view to_string(DatasetRole role) {
  switch (role) {
    case DatasetRole::kTrain:
      return "train";
    case DatasetRole::kValidation:
      return "validation";
    case DatasetRole::kTest:
      return "test";
  }
  return "unknown";
}

Dataset::Dataset(std::vector<LabeledExample> examples, LabelMap label_map,
                 DatasetRole role)
    : examples_(std::move(examples)),
      label_map_(std::move(label_map)),
      role_(role) {
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    if (is_blank(examples_[i].text)) {
      throw DataError("example " + std::to_string(i) + " has empty text");
    }
    if (examples_[i].label >= label_map_.size()) {
      throw DataError("example " + std::to_string(i) + " has label id " +
                      std::to_string(examples_[i].label) + " outside [0, " +
                      std::to_string(label_map_.size()) + ")");
    }
  }
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (const auto& ex : examples_) ++counts[ex.label];
  return counts;
}

std::vector<ClassId> Dataset::labels() const {
  std::vector<ClassId> out;
  out.reserve(examples_.size());
  for (const auto& ex : examples_) out.push_back(ex.label);
  return out;
}

std::vector<std::vector<std::size_t>> Dataset::indices_by_class() const {
  std::vector<std::vector<std::size_t>> out(num_classes());
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    out[examples_[i].label].push_back(i);
  }
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<LabeledExample> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(examples_.at(i));
  return Dataset(std::move(picked), label_map_, role_);
}

Dataset Dataset::with_role(DatasetRole role) const {
  Dataset copy = *this;
  copy.role_ = role;
  return copy;
}

ClassDistribution::ClassDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw DataError("empty class distribution");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw DataError("negative or NaN class probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DataError("class probabilities sum to " + std::to_string(total));
  }
}

ClassDistribution ClassDistribution::uniform(std::size_t num_classes) {
  if (num_classes == 0) throw DataError("uniform over zero classes");
  return ClassDistribution(
      std::vector<double>(num_classes, 1.0 / static_cast<double>(num_classes)));
}

ClassDistribution ClassDistribution::from_counts(
    std::span<const std::size_t> counts) {
  const std::size_t total =
      std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) throw DataError("empty dataset");
  std::vector<double> probs;
  probs.reserve(counts.size());
  for (std::size_t c : counts) {
    probs.push_back(static_cast<double>(c) / static_cast<double>(total));
  }
  return ClassDistribution(std::move(probs));
}

Dataset read_dataset(std::istream& in, const std::optional<LabelMap>& label_map,
                     DatasetRole role) {
  struct RawRecord {
    std::string text;
    std::string label;
    std::size_t line;
  };
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with(kUtf8Bom)) {
      throw ParseError("unexpected UTF-8 byte order mark", line_no);
    }
    if (is_blank(line)) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!record.is_object()) throw ParseError("record is not an object", line_no);
    const auto text = record.find("text");
    const auto label = record.find("label");
    if (text == record.end() || !text->is_string()) {
      throw ParseError("missing string field \"text\"", line_no);
    }
    if (label == record.end() || !label->is_string()) {
      throw ParseError("missing string field \"label\"", line_no);
    }
    if (is_blank(text->get_ref<const std::string&>())) {
      throw ParseError("empty text", line_no);
    }
    records.push_back({text->get<std::string>(), label->get<std::string>(),
                       line_no});
  }
  if (records.empty()) throw DataError("empty dataset");

  LabelMap labels = [&] {
    if (label_map) return *label_map;
    std::vector<std::string> names;
    for (const auto& r : records) names.push_back(r.label);
    return LabelMap::from_observed(std::move(names));
  }();

  std::vector<LabeledExample> examples;
  examples.reserve(records.size());
  for (auto& r : records) {
    const auto id = labels.find(r.label);
    if (!id) {
      throw LabelError("line " + std::to_string(r.line) + ": unknown label '" +
                       r.label + "'");
    }
    examples.push_back({std::move(r.text), *id});
  }
  return Dataset(std::move(examples), std::move(labels), role);
}

Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<LabelMap>& label_map,
                     DatasetRole role) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file " + path.string());
  return read_dataset(in, label_map, role);
}

void write_dataset(std::ostream& out, const Dataset& d) {
  for (const auto& ex : d.examples()) {
    nlohmann::json record = {{"text", ex.text},
                             {"label", d.label_map().name(ex.label)}};
    out << record.dump() << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file " + path.string());
  write_dataset(out, d);
}

ClassDistribution class_distribution(const Dataset& d) {
  if (d.empty()) throw DataError("empty dataset");
  const auto counts = d.class_counts();
  return ClassDistribution::from_counts(counts);
}

ImbalanceStats imbalance_ratio(std::span<const std::size_t> counts) {
  if (counts.empty()) throw DataError("undefined ratio: no classes");
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  if (*lo == 0) throw DataError("undefined ratio: a class has no examples");
  return {std::vector<std::size_t>(counts.begin(), counts.end()),
          static_cast<double>(*hi) / static_cast<double>(*lo)};
}

ImbalanceStats imbalance_ratio(const Dataset& d) {
  return imbalance_ratio(d.class_counts());
}

double kl_divergence(const ClassDistribution& target,
                     const ClassDistribution& q) {
  if (target.size() != q.size()) {
    throw DataError("distribution length mismatch: " +
                    std::to_string(target.size()) + " vs " +
                    std::to_string(q.size()));
  }
  double kl = 0.0;
  for (std::size_t c = 0; c < target.size(); ++c) {
    if (target[c] == 0.0) continue;
    if (q[c] == 0.0) throw DataError("infinite divergence at class " + std::to_string(c));
    kl += target[c] * std::log(target[c] / q[c]);
  }
  // Rounding can leave a tiny negative value for identical inputs.
  return std::max(kl, 0.0);
}

Dataset simulate_imbalance(const Dataset& d, const SimulationConfig& cfg,
                           std::uint64_t seed) {
  if (!(cfg.rho >= 1.0)) throw ConfigError("rho must be >= 1");
  if (cfg.majority_count == 0) throw ConfigError("majority_count must be positive");

  std::vector<bool> is_minority(d.num_classes(), false);
  if (cfg.minority_classes.empty()) {
    is_minority[0] = true;
  } else {
    for (const auto& name : cfg.minority_classes) {
      const auto id = d.label_map().find(name);
      if (!id) throw LabelError("unknown minority class '" + name + "'");
      is_minority[*id] = true;
    }
  }
  const auto minority_count = static_cast<std::size_t>(
      std::llround(static_cast<double>(cfg.majority_count) / cfg.rho));
  if (minority_count == 0) throw ConfigError("rho leaves zero minority examples");

  auto by_class = d.indices_by_class();
  Rng rng(seed);
  std::vector<std::size_t> picked;
  for (ClassId c = 0; c < by_class.size(); ++c) {
    const std::size_t want = is_minority[c] ? minority_count : cfg.majority_count;
    auto& pool = by_class[c];
    if (pool.size() < want) {
      throw DataError("class '" + d.label_map().name(c) + "' has " +
                      std::to_string(pool.size()) + " examples, need " +
                      std::to_string(want));
    }
    shuffle(std::span(pool), rng);
    picked.insert(picked.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(want));
  }
  std::sort(picked.begin(), picked.end());
  return d.subset(picked).with_role(DatasetRole::kTrain);
}

}  // namespace seqtarget
