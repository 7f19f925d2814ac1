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

#ifndef SEQTARGET_HARNESS_H_
#define SEQTARGET_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqtarget/augment.h"
#include "seqtarget/corpus.h"
#include "seqtarget/featurizer.h"
#include "seqtarget/metrics.h"
#include "seqtarget/model.h"
#include "seqtarget/partition.h"
#include "seqtarget/synthetic.h"
#include "seqtarget/trainer.h"

namespace seqtarget {

enum class Method { kBaseline, kRos, kRus, kSt, kStRos, kEda, kStEda };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
bool is_sequential(Method m);
bool uses_eda(Method m);

struct SyntheticData {
  SyntheticConfig generator;
  std::size_t pool_per_class = 12500;
  std::size_t val_per_class = 1000;
  std::size_t test_per_class = 5000;
};

// One experiment: a data source, the methods to compare and the shared
// training setup. Parsed from a flat `key = value` file; see README for keys.
struct ExperimentSpec {
  std::filesystem::path train_path;
  std::filesystem::path val_path;
  std::filesystem::path test_path;
  // Use the built-in generator instead of the three files.
  bool synthetic = false;
  SyntheticData synthetic_data;
  std::optional<SimulationConfig> simulation;

  std::vector<Method> methods = {Method::kBaseline};
  std::size_t trials = 5;
  std::uint64_t seed = 0;

  TrainConfig train;
  SplitConfig split;
  VocabOptions vocab;
  std::size_t max_len = 128;
  ModelConfig model;  // vocab_size and num_classes are filled from data

  // Path to a TSV lexicon, or "synthetic" for the generator's own lexicon.
  std::string lexicon;
  EdaOptions eda;

  std::filesystem::path out_path;
  std::size_t jobs = 1;
  // wall_ms is 0 unless enabled, which keeps the CSV byte-reproducible.
  bool record_wall_time = false;

  // Canonical key/value form, used for hashing.
  std::map<std::string, std::string> entries;

  void validate() const;
};

ExperimentSpec parse_spec(std::istream& in);
ExperimentSpec load_spec(const std::filesystem::path& path);
// Applies one `key = value` setting; throws ConfigError on unknown keys.
void set_spec_value(ExperimentSpec& spec, const std::string& key, const std::string& value);
// 16 hex digits over the canonical entries.
std::string spec_hash(const ExperimentSpec& spec);

// Data shared by every method of an experiment.
struct PreparedData {
  Dataset train;
  Dataset val;
  Dataset test;
  std::optional<SynonymLexicon> lexicon;
  std::optional<ClassId> positive_class;
  double rho = 1.0;
};

PreparedData prepare_data(const ExperimentSpec& spec);

// Task sequence a method trains on.
struct Pipeline {
  Method method = Method::kBaseline;
  std::vector<Dataset> tasks;
  std::optional<SplitPlan> plan;
};

// Never modifies `data`; every task is a derived copy.
Pipeline compose_method(Method method, const ExperimentSpec& spec, const PreparedData& data);

struct TrialOutcome {
  std::size_t trial = 0;  // 1-based
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  MetricsReport val;
  MetricsReport test;
  std::vector<EpochRecord> history;
  std::optional<ModelState> model;
  double wall_ms = 0.0;
};

struct ResultRow {
  std::string method;
  std::string rho;
  std::string trial;  // "1".."n", "best" or "mean_sd"
  std::uint64_t seed = 0;
  ClassMetrics headline;
  double macro_f1 = 0.0;
  std::optional<ClassMetrics> headline_sd;  // mean_sd rows only
  double macro_f1_sd = 0.0;
  double wall_ms = 0.0;
  bool ok = true;
};

struct MethodRun {
  Method method = Method::kBaseline;
  std::optional<SplitPlan> plan;
  std::vector<TrialOutcome> trials;
  std::optional<std::size_t> best_trial;  // index into trials
};

struct ExperimentResult {
  std::string spec_hash;
  std::vector<MethodRun> runs;
  std::vector<ResultRow> rows;
  std::size_t failed_trials = 0;
  // Shared across methods; needed to reload checkpoints.
  std::optional<Vocabulary> vocabulary;
  std::optional<LabelMap> labels;
  std::optional<ClassId> positive_class;
};

// Trial t (1-based) trains with seed = spec.seed + t; data, splits and
// resampling stay fixed across trials. Failed trials are recorded, not
// thrown. Rows per method: one per trial, then "best" (highest validation
// F1) and "mean_sd".
ExperimentResult run_experiment(const ExperimentSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "method,rho,trial,seed,f1,precision,recall,macro_f1,wall_ms,spec_hash";

void write_csv(std::ostream& out, const ExperimentResult& result);

// Model + vocabulary + labels, enough to evaluate raw text files.
struct ModelBundle {
  ModelState model;
  Vocabulary vocabulary;
  LabelMap labels;
  std::size_t max_len = 128;
  std::optional<ClassId> positive_class;
};

nlohmann::json to_json(const ModelBundle& b);
ModelBundle bundle_from_json(const nlohmann::json& j);
void save_bundle(const std::filesystem::path& path, const ModelBundle& b);
ModelBundle load_bundle(const std::filesystem::path& path);

MetricsReport evaluate_bundle(const ModelBundle& b, const Dataset& test);

}  // namespace seqtarget

#endif  // SEQTARGET_HARNESS_H_
