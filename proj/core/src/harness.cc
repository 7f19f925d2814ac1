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

#include "seqtarget/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "seqtarget/errors.h"
#include "seqtarget/random.h"
#include "seqtarget/resample.h"

namespace seqtarget {
namespace {

// Independent streams for data-level randomness; trial seeds are separate.
enum DataStream : std::uint64_t {
  kPoolStream = 1,
  kValStream,
  kTestStream,
  kSimulationStream,
  kPlanStream,
  kRosStream,
  kRusStream,
  kEdaStream,
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(sep, start);
    const auto item = trim(s.substr(start, end == std::string_view::npos ? end : end - start));
    if (!item.empty()) out.push_back(item);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::string format_fixed(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string format_rho(double rho) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", rho);
  return buf;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Keys that change how a run executes but not what it produces.
bool affects_results(const std::string& key) {
  return key != "jobs" && key != "out";
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kBaseline:
      return "baseline";
    case Method::kRos:
      return "ros";
    case Method::kRus:
      return "rus";
    case Method::kSt:
      return "st";
    case Method::kStRos:
      return "st_ros";
    case Method::kEda:
      return "eda";
    case Method::kStEda:
      return "st_eda";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kBaseline, Method::kRos, Method::kRus, Method::kSt,
                   Method::kStRos, Method::kEda, Method::kStEda}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

bool is_sequential(Method m) {
  return m == Method::kSt || m == Method::kStRos || m == Method::kStEda;
}

bool uses_eda(Method m) { return m == Method::kEda || m == Method::kStEda; }

void set_spec_value(ExperimentSpec& spec, const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  if (key == "val") key = "validation";
  if (key == "method") key = "methods";

  auto size = [&] { return parse_number<std::size_t>(key, value); };
  auto real = [&] { return parse_number<double>(key, value); };
  auto sim = [&]() -> SimulationConfig& {
    if (!spec.simulation) spec.simulation.emplace();
    return *spec.simulation;
  };
  auto& gen = spec.synthetic_data.generator;

  if (key == "train") {
    spec.train_path = value;
  } else if (key == "validation") {
    spec.val_path = value;
  } else if (key == "test") {
    spec.test_path = value;
  } else if (key == "synthetic") {
    spec.synthetic = parse_bool(key, value);
  } else if (key == "synthetic_classes") {
    gen.num_classes = size();
  } else if (key == "synthetic_pool_per_class") {
    spec.synthetic_data.pool_per_class = size();
  } else if (key == "synthetic_val_per_class") {
    spec.synthetic_data.val_per_class = size();
  } else if (key == "synthetic_test_per_class") {
    spec.synthetic_data.test_per_class = size();
  } else if (key == "synthetic_keywords") {
    gen.keywords_per_class = size();
  } else if (key == "synthetic_noise_vocab") {
    gen.noise_vocab = size();
  } else if (key == "synthetic_signal") {
    gen.signal_rate = real();
  } else if (key == "synthetic_cross") {
    gen.cross_rate = real();
  } else if (key == "synthetic_min_len") {
    gen.min_length = size();
  } else if (key == "synthetic_max_len") {
    gen.max_length = size();
  } else if (key == "synthetic_zipf") {
    gen.zipf_exponent = real();
  } else if (key == "synthetic_vocab_seed") {
    gen.vocabulary_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "rho") {
    sim().rho = real();
  } else if (key == "majority_count") {
    sim().majority_count = size();
  } else if (key == "minority_class") {
    sim().minority_classes = split_list(value, ',');
  } else if (key == "methods") {
    spec.methods.clear();
    for (const auto& name : split_list(value, ',')) spec.methods.push_back(parse_method(name));
  } else if (key == "trials") {
    spec.trials = size();
  } else if (key == "seed") {
    spec.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "epochs") {
    spec.train.epochs = size();
  } else if (key == "batch_size") {
    spec.train.batch_size = size();
  } else if (key == "learning_rate") {
    spec.train.learning_rate = real();
  } else if (key == "lambda") {
    spec.train.lambda = real();
  } else if (key == "fisher_sample_cap") {
    spec.train.fisher_sample_cap = size();
  } else if (key == "k") {
    spec.split.k = size();
  } else if (key == "eta") {
    spec.split.eta.clear();
    const char sep = value.find(':') != std::string::npos ? ':' : ',';
    for (const auto& item : split_list(value, sep)) {
      spec.split.eta.push_back(parse_number<std::size_t>(key, item));
    }
  } else if (key == "vocab_size") {
    spec.vocab.max_size = size();
  } else if (key == "min_freq") {
    spec.vocab.min_freq = size();
  } else if (key == "max_len") {
    spec.max_len = size();
  } else if (key == "embedding_dim") {
    spec.model.embedding_dim = size();
  } else if (key == "hidden_dim") {
    spec.model.hidden_dim = size();
  } else if (key == "dropout") {
    spec.model.dropout = real();
  } else if (key == "lexicon") {
    spec.lexicon = value;
  } else if (key == "eda_ops") {
    spec.eda.ops.clear();
    for (const auto& name : split_list(value, ',')) spec.eda.ops.push_back(parse_eda_op(name));
  } else if (key == "eda_n") {
    spec.eda.n_per_op = parse_number<int>(key, value);
  } else if (key == "eda_p_del") {
    spec.eda.p_del = real();
  } else if (key == "out") {
    spec.out_path = value;
  } else if (key == "jobs") {
    spec.jobs = size();
  } else if (key == "record_wall_time") {
    spec.record_wall_time = parse_bool(key, value);
  } else {
    throw ConfigError("unknown spec key '" + raw_key + "'");
  }
  spec.entries[key] = value;
}

ExperimentSpec parse_spec(std::istream& in) {
  ExperimentSpec spec;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("spec line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("spec line " + std::to_string(line_no) + ": empty key");
    }
    try {
      set_spec_value(spec, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("spec line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file " + path.string());
  auto spec = parse_spec(in);
  // Relative data paths resolve against the spec file's directory.
  const auto base = path.parent_path();
  for (auto* p : {&spec.train_path, &spec.val_path, &spec.test_path}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  if (!spec.lexicon.empty() && spec.lexicon != "synthetic" &&
      std::filesystem::path(spec.lexicon).is_relative()) {
    spec.lexicon = (base / spec.lexicon).string();
  }
  return spec;
}

std::string spec_hash(const ExperimentSpec& spec) {
  std::uint64_t h = fnv1a("seqtarget-spec-v1\n");
  for (const auto& [key, value] : spec.entries) {
    if (!affects_results(key)) continue;
    h = fnv1a(key + "=" + value + "\n", h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ExperimentSpec::validate() const {
  if (!synthetic && (train_path.empty() || val_path.empty() || test_path.empty())) {
    throw ConfigError("spec needs train, validation and test paths, or synthetic = true");
  }
  if (synthetic) synthetic_data.generator.validate();
  if (methods.empty()) throw ConfigError("no methods selected");
  if (trials == 0) throw ConfigError("trials must be positive");
  if (jobs == 0) throw ConfigError("jobs must be positive");
  if (max_len == 0) throw ConfigError("max_len must be positive");
  train.validate();
  if (simulation && simulation->majority_count == 0) {
    throw ConfigError("simulation needs majority_count");
  }
  const bool any_sequential = std::any_of(methods.begin(), methods.end(), is_sequential);
  if (any_sequential) split.validate();
  for (Method m : methods) {
    if (uses_eda(m) && lexicon.empty()) {
      throw ConfigError("method " + std::string(to_string(m)) + " requires a lexicon");
    }
  }
  if (lexicon == "synthetic" && !synthetic) {
    throw ConfigError("lexicon = synthetic needs synthetic = true");
  }
  if (std::any_of(methods.begin(), methods.end(), uses_eda) && eda.ops.empty()) {
    throw ConfigError("eda_ops is empty");
  }
}

PreparedData prepare_data(const ExperimentSpec& spec) {
  auto load = [&]() -> std::tuple<Dataset, Dataset, Dataset> {
    if (spec.synthetic) {
      const auto& s = spec.synthetic_data;
      const auto p = s.generator.num_classes;
      const std::vector<std::size_t> pool(p, s.pool_per_class);
      const std::vector<std::size_t> val(p, s.val_per_class);
      const std::vector<std::size_t> test(p, s.test_per_class);
      return {generate_synthetic(s.generator, pool, DatasetRole::kTrain,
                                 derive_seed(spec.seed, kPoolStream)),
              generate_synthetic(s.generator, val, DatasetRole::kValidation,
                                 derive_seed(spec.seed, kValStream)),
              generate_synthetic(s.generator, test, DatasetRole::kTest,
                                 derive_seed(spec.seed, kTestStream))};
    }
    Dataset train = load_dataset(spec.train_path, std::nullopt, DatasetRole::kTrain);
    Dataset val = load_dataset(spec.val_path, train.label_map(), DatasetRole::kValidation);
    Dataset test = load_dataset(spec.test_path, train.label_map(), DatasetRole::kTest);
    return {std::move(train), std::move(val), std::move(test)};
  };
  auto [train, val, test] = load();

  std::optional<ClassId> positive;
  double rho;
  if (spec.simulation) {
    train = simulate_imbalance(train, *spec.simulation, derive_seed(spec.seed, kSimulationStream));
    rho = spec.simulation->rho;
    if (spec.simulation->minority_classes.empty()) {
      positive = 0;
    } else {
      positive = train.label_map().find(spec.simulation->minority_classes.front());
    }
  } else {
    const auto stats = imbalance_ratio(train);
    rho = stats.rho;
    positive = static_cast<ClassId>(
        std::min_element(stats.counts.begin(), stats.counts.end()) - stats.counts.begin());
  }
  if (train.num_classes() != 2) positive.reset();

  std::optional<SynonymLexicon> lexicon;
  if (std::any_of(spec.methods.begin(), spec.methods.end(), uses_eda)) {
    lexicon = spec.lexicon == "synthetic" ? synthetic_lexicon(spec.synthetic_data.generator)
                                          : load_lexicon(spec.lexicon);
  }
  return {std::move(train), std::move(val), std::move(test), std::move(lexicon), positive, rho};
}

Pipeline compose_method(Method method, const ExperimentSpec& spec, const PreparedData& data) {
  if (uses_eda(method) && !data.lexicon) {
    throw ConfigError("method " + std::string(to_string(method)) + " requires a lexicon");
  }
  auto eda_top_up = [&](const Dataset& d) {
    const auto counts = d.class_counts();
    const std::vector<std::size_t> target(counts.size(),
                                          *std::max_element(counts.begin(), counts.end()));
    return eda_oversample(d, target, *data.lexicon, spec.eda,
                          derive_seed(spec.seed, kEdaStream));
  };

  Pipeline pipe;
  pipe.method = method;
  switch (method) {
    case Method::kBaseline:
      pipe.tasks.push_back(data.train);
      return pipe;
    case Method::kRos:
      pipe.tasks.push_back(ros(data.train, derive_seed(spec.seed, kRosStream)));
      return pipe;
    case Method::kRus:
      pipe.tasks.push_back(rus(data.train, derive_seed(spec.seed, kRusStream)));
      return pipe;
    case Method::kEda:
      pipe.tasks.push_back(eda_top_up(data.train));
      return pipe;
    case Method::kSt:
    case Method::kStRos:
    case Method::kStEda:
      break;
  }

  spec.split.validate();
  pipe.plan = plan_splits(data.train, spec.split, derive_seed(spec.seed, kPlanStream));
  const auto check = validate_sequence(*pipe.plan);
  if (!check.ok) {
    std::string what = "split plan failed validation:";
    for (const auto& v : check.violations) what += " " + v;
    throw OrderingError(what);
  }
  for (const auto& split : pipe.plan->splits) pipe.tasks.push_back(data.train.subset(split));
  if (method == Method::kStRos) {
    pipe.tasks.front() = ros(pipe.tasks.front(), derive_seed(spec.seed, kRosStream));
  } else if (method == Method::kStEda) {
    pipe.tasks.front() = eda_top_up(pipe.tasks.front());
  }
  return pipe;
}

namespace {

struct EncodedData {
  Vocabulary vocab;
  EncodedDataset val;
  EncodedDataset test;
  ModelConfig model;
};

TrialOutcome run_trial(const ExperimentSpec& spec, const PreparedData& data,
                       const EncodedData& enc, std::span<const EncodedDataset> tasks,
                       std::size_t trial) {
  TrialOutcome out;
  out.trial = trial;
  out.seed = spec.seed + trial;
  const auto start = std::chrono::steady_clock::now();
  try {
    TrainConfig cfg = spec.train;
    cfg.seed = out.seed;
    cfg.positive_class = data.positive_class;
    ModelState model = init_model(out.seed, enc.model);
    auto result = sequential_train(std::move(model), tasks, enc.val, cfg);
    out.val = result.final_val;
    out.history = std::move(result.history);
    const auto predictions = predict(result.final_model, enc.test.features);
    out.test = report(confusion(enc.test.labels, predictions, enc.test.num_classes),
                      data.positive_class);
    out.model = std::move(result.final_model);
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  if (spec.record_wall_time) {
    out.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  return out;
}

ResultRow trial_row(Method method, const std::string& rho, const TrialOutcome& t) {
  ResultRow row;
  row.method = std::string(to_string(method));
  row.rho = rho;
  row.trial = std::to_string(t.trial);
  row.seed = t.seed;
  row.ok = t.ok;
  if (t.ok) {
    row.headline = t.test.headline();
    row.macro_f1 = t.test.macro_f1;
  }
  row.wall_ms = t.wall_ms;
  return row;
}

void append_summary_rows(const ExperimentSpec& spec, const std::string& rho, MethodRun& run,
                         std::vector<ResultRow>& rows) {
  std::vector<const TrialOutcome*> ok;
  for (const auto& t : run.trials) {
    if (t.ok) ok.push_back(&t);
  }
  const auto name = std::string(to_string(run.method));

  ResultRow best;
  best.method = name;
  best.rho = rho;
  best.trial = "best";
  best.seed = spec.seed;
  best.ok = false;
  for (std::size_t i = 0; i < run.trials.size(); ++i) {
    const auto& t = run.trials[i];
    if (!t.ok) continue;
    if (!run.best_trial || t.val.headline().f1 > run.trials[*run.best_trial].val.headline().f1) {
      run.best_trial = i;
    }
  }
  if (run.best_trial) {
    best = trial_row(run.method, rho, run.trials[*run.best_trial]);
    best.trial = "best";
  }
  rows.push_back(best);

  ResultRow mean;
  mean.method = name;
  mean.rho = rho;
  mean.trial = "mean_sd";
  mean.seed = spec.seed;
  mean.ok = !ok.empty();
  if (!ok.empty()) {
    const double n = static_cast<double>(ok.size());
    auto stats = [&](auto&& field) {
      double m = 0.0;
      for (const auto* t : ok) m += field(*t);
      m /= n;
      double var = 0.0;
      for (const auto* t : ok) var += (field(*t) - m) * (field(*t) - m);
      // Sample standard deviation; zero for a single trial.
      const double sd = ok.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
      return std::pair{m, sd};
    };
    ClassMetrics sd;
    std::tie(mean.headline.f1, sd.f1) = stats([](const TrialOutcome& t) { return t.test.headline().f1; });
    std::tie(mean.headline.precision, sd.precision) =
        stats([](const TrialOutcome& t) { return t.test.headline().precision; });
    std::tie(mean.headline.recall, sd.recall) =
        stats([](const TrialOutcome& t) { return t.test.headline().recall; });
    std::tie(mean.macro_f1, mean.macro_f1_sd) =
        stats([](const TrialOutcome& t) { return t.test.macro_f1; });
    mean.headline_sd = sd;
    mean.wall_ms = stats([](const TrialOutcome& t) { return t.wall_ms; }).first;
  }
  rows.push_back(mean);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.spec_hash = spec_hash(spec);

  const PreparedData data = prepare_data(spec);
  EncodedData enc{build_vocab(data.train, spec.vocab), {}, {}, spec.model};
  enc.val = encode_dataset(data.val, enc.vocab, spec.max_len);
  enc.test = encode_dataset(data.test, enc.vocab, spec.max_len);
  enc.model.vocab_size = enc.vocab.size();
  enc.model.num_classes = data.train.num_classes();
  result.vocabulary = enc.vocab;
  result.labels = data.train.label_map();
  result.positive_class = data.positive_class;
  const std::string rho = format_rho(data.rho);

  for (Method method : spec.methods) {
    MethodRun run;
    run.method = method;
    run.trials.resize(spec.trials);

    std::vector<EncodedDataset> tasks;
    std::string compose_error;
    try {
      Pipeline pipe = compose_method(method, spec, data);
      run.plan = std::move(pipe.plan);
      for (const auto& task : pipe.tasks) {
        tasks.push_back(encode_dataset(task, enc.vocab, spec.max_len));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      compose_error = e.what();
    }

    if (!compose_error.empty()) {
      for (std::size_t t = 0; t < spec.trials; ++t) {
        run.trials[t].trial = t + 1;
        run.trials[t].seed = spec.seed + t + 1;
        run.trials[t].error = compose_error;
      }
    } else {
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < spec.trials;) {
          run.trials[t] = run_trial(spec, data, enc, tasks, t + 1);
        }
      };
      const std::size_t jobs = std::min(spec.jobs, spec.trials);
      if (jobs <= 1) {
        worker();
      } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
      }
    }

    for (const auto& t : run.trials) {
      if (!t.ok) ++result.failed_trials;
      result.rows.push_back(trial_row(method, rho, t));
    }
    append_summary_rows(spec, rho, run, result.rows);
    result.runs.push_back(std::move(run));
  }
  return result;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& row : result.rows) {
    auto cell = [&](double value, std::optional<double> sd) {
      if (!row.ok) return std::string("nan");
      if (sd) return format_fixed(value) + "±" + format_fixed(*sd);
      return format_fixed(value);
    };
    const auto& sd = row.headline_sd;
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.0f", row.wall_ms);
    out << row.method << ',' << row.rho << ',' << row.trial << ',' << row.seed << ','
        << cell(row.headline.f1, sd ? std::optional(sd->f1) : std::nullopt) << ','
        << cell(row.headline.precision, sd ? std::optional(sd->precision) : std::nullopt)
        << ','
        << cell(row.headline.recall, sd ? std::optional(sd->recall) : std::nullopt) << ','
        << cell(row.macro_f1, sd ? std::optional(row.macro_f1_sd) : std::nullopt) << ','
        << wall << ',' << result.spec_hash << '\n';
  }
}

nlohmann::json to_json(const ModelBundle& b) {
  nlohmann::json j;
  j["format"] = "seqtarget.bundle";
  j["version"] = 1;
  j["model"] = to_json(b.model);
  j["vocabulary"] = to_json(b.vocabulary);
  j["labels"] = b.labels.names();
  j["max_len"] = b.max_len;
  j["positive_class"] = b.positive_class ? nlohmann::json(b.labels.name(*b.positive_class))
                                         : nlohmann::json();
  return j;
}

ModelBundle bundle_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "seqtarget.bundle") {
      throw ParseError("not a seqtarget checkpoint bundle", 0);
    }
    if (j.at("version").get<int>() != 1) throw ParseError("unsupported bundle version", 0);
    ModelBundle b{model_from_json(j.at("model")), vocabulary_from_json(j.at("vocabulary")),
                  LabelMap(j.at("labels").get<std::vector<std::string>>()),
                  j.at("max_len").get<std::size_t>(), std::nullopt};
    if (j.contains("positive_class") && j["positive_class"].is_string()) {
      b.positive_class = b.labels.find(j["positive_class"].get<std::string>());
    }
    if (b.model.config().vocab_size != b.vocabulary.size() ||
        b.model.config().num_classes != b.labels.size()) {
      throw ParseError("bundle model does not match its vocabulary or labels", 0);
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad checkpoint bundle: ") + e.what(), 0);
  }
}

void save_bundle(const std::filesystem::path& path, const ModelBundle& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << to_json(b).dump() << '\n';
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("checkpoint is not JSON: ") + e.what(), 0);
  }
  return bundle_from_json(j);
}

MetricsReport evaluate_bundle(const ModelBundle& b, const Dataset& test) {
  if (!(test.label_map() == b.labels)) {
    throw LabelError("test set labels do not match the checkpoint's label map");
  }
  const auto enc = encode_dataset(test, b.vocabulary, b.max_len);
  const auto predictions = predict(b.model, enc.features);
  return report(confusion(enc.labels, predictions, enc.num_classes), b.positive_class);
}

}  // namespace seqtarget
