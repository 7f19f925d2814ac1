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

// seqtarget: sequential-targeting experiments from the command line.
//
//   seqtarget run   --spec exp.conf [--out results.csv] [--seed N] [--jobs N]
//   seqtarget plan  --spec exp.conf | --train train.jsonl  [--dump-splits plan.json]
//   seqtarget eval  --checkpoint model.json --test test.jsonl [--out eval.csv]
//   seqtarget synth --out-dir data/ [--classes 2] [--pool 12500]
//
// Exit status: 0 success, 1 configuration or input error, 2 when some trials
// failed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "seqtarget/augment.h"
#include "seqtarget/corpus.h"
#include "seqtarget/errors.h"
#include "seqtarget/harness.h"
#include "seqtarget/partition.h"
#include "seqtarget/synthetic.h"

namespace {

namespace fs = std::filesystem;
using namespace seqtarget;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct RunArgs {
  fs::path spec;
  std::optional<fs::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<fs::path> dump_history;
  std::optional<fs::path> dump_splits;
  std::optional<fs::path> checkpoint_dir;
};

struct PlanArgs {
  std::optional<fs::path> spec;
  std::optional<fs::path> train;
  std::size_t k = 2;
  std::string eta;
  std::uint64_t seed = 0;
  std::optional<fs::path> dump_splits;
};

struct EvalArgs {
  fs::path checkpoint;
  fs::path test;
  std::optional<fs::path> out;
};

struct SynthArgs {
  fs::path out_dir;
  std::size_t classes = 2;
  std::size_t pool = 12500;
  std::size_t val = 1000;
  std::size_t test = 5000;
  std::uint64_t seed = 0;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_json(const std::optional<fs::path>& path, const nlohmann::json& j) {
  if (!path || path->string() == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  open_out(*path) << j.dump(2) << '\n';
}

int run_command(const RunArgs& args) {
  ExperimentSpec spec = load_spec(args.spec);
  if (args.seed) set_spec_value(spec, "seed", std::to_string(*args.seed));
  if (args.jobs) set_spec_value(spec, "jobs", std::to_string(*args.jobs));
  if (args.out) spec.out_path = *args.out;

  const auto result = run_experiment(spec);

  if (spec.out_path.empty()) {
    write_csv(std::cout, result);
  } else {
    auto out = open_out(spec.out_path);
    write_csv(out, result);
  }

  if (args.dump_history) {
    auto out = open_out(*args.dump_history);
    for (const auto& run : result.runs) {
      for (const auto& trial : run.trials) {
        for (const auto& record : trial.history) {
          auto j = to_json(record);
          j["method"] = to_string(run.method);
          j["trial"] = trial.trial;
          j["seed"] = trial.seed;
          out << j.dump() << '\n';
        }
      }
    }
  }
  if (args.dump_splits) {
    nlohmann::json plans = nlohmann::json::object();
    for (const auto& run : result.runs) {
      if (run.plan) plans[std::string(to_string(run.method))] = to_json(*run.plan);
    }
    write_json(args.dump_splits, plans);
  }
  if (args.checkpoint_dir) {
    fs::create_directories(*args.checkpoint_dir);
    for (const auto& run : result.runs) {
      if (!run.best_trial) continue;
      const auto& trial = run.trials[*run.best_trial];
      ModelBundle bundle{*trial.model, *result.vocabulary, *result.labels, spec.max_len,
                         result.positive_class};
      save_bundle(*args.checkpoint_dir / (std::string(to_string(run.method)) + ".json"),
                  bundle);
    }
  }

  for (const auto& run : result.runs) {
    for (const auto& trial : run.trials) {
      if (!trial.ok) {
        std::cerr << "seqtarget: " << to_string(run.method) << " trial " << trial.trial
                  << " failed: " << trial.error << '\n';
      }
    }
  }
  return result.failed_trials == 0 ? kExitOk : kExitPartial;
}

int plan_command(const PlanArgs& args) {
  if (args.spec.has_value() == args.train.has_value()) {
    throw ConfigError("plan needs exactly one of --spec or --train");
  }
  Dataset train = [&] {
    if (args.train) return load_dataset(*args.train);
    return prepare_data(load_spec(*args.spec)).train;
  }();
  SplitConfig cfg;
  std::uint64_t seed = args.seed;
  if (args.spec) {
    const auto spec = load_spec(*args.spec);
    cfg = spec.split;
    seed = spec.seed;
  } else {
    ExperimentSpec scratch;
    set_spec_value(scratch, "k", std::to_string(args.k));
    if (!args.eta.empty()) set_spec_value(scratch, "eta", args.eta);
    cfg = scratch.split;
  }
  const auto plan = plan_splits(train, cfg, seed);
  const auto check = validate_sequence(plan);
  std::cerr << "splits: " << plan.splits.size() << '\n';
  for (std::size_t i = 0; i < plan.splits.size(); ++i) {
    std::cerr << "  split " << i + 1 << ": " << plan.splits[i].size()
              << " examples, KL " << plan.kls[i] << '\n';
  }
  if (plan.advisory) std::cerr << "advisory: " << *plan.advisory << '\n';
  std::cerr << "validation: " << (check.ok ? "pass" : "fail") << '\n';
  write_json(args.dump_splits, to_json(plan));
  return check.ok ? kExitOk : kExitConfig;
}

int eval_command(const EvalArgs& args) {
  const auto bundle = load_bundle(args.checkpoint);
  const auto test = load_dataset(args.test, bundle.labels, DatasetRole::kTest);
  const auto r = evaluate_bundle(bundle, test);
  const auto head = r.headline();
  std::printf("f1=%.6f precision=%.6f recall=%.6f macro_f1=%.6f accuracy=%.6f\n", head.f1,
              head.precision, head.recall, r.macro_f1, r.accuracy);
  if (args.out) {
    auto out = open_out(*args.out);
    char line[256];
    std::snprintf(line, sizeof line, "checkpoint,%.4g,eval,%llu,%.6f,%.6f,%.6f,%.6f,0,-\n",
                  imbalance_ratio(test).rho,
                  static_cast<unsigned long long>(bundle.model.seed()), head.f1,
                  head.precision, head.recall, r.macro_f1);
    out << kCsvHeader << '\n' << line;
  }
  return kExitOk;
}

int synth_command(const SynthArgs& args) {
  SyntheticConfig cfg;
  cfg.num_classes = args.classes;
  fs::create_directories(args.out_dir);
  auto counts = [&](std::size_t n) { return std::vector<std::size_t>(args.classes, n); };
  save_dataset(args.out_dir / "train.jsonl",
               generate_synthetic(cfg, counts(args.pool), DatasetRole::kTrain, args.seed));
  save_dataset(args.out_dir / "val.jsonl",
               generate_synthetic(cfg, counts(args.val), DatasetRole::kValidation,
                                  args.seed + 1));
  save_dataset(args.out_dir / "test.jsonl",
               generate_synthetic(cfg, counts(args.test), DatasetRole::kTest, args.seed + 2));

  const auto lex = synthetic_lexicon(cfg);
  auto out = open_out(args.out_dir / "lexicon.tsv");
  write_lexicon(out, lex);
  std::cerr << "wrote " << args.out_dir.string() << "/{train,val,test}.jsonl and lexicon.tsv ("
            << lex.size() << " entries)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential targeting for imbalanced text classification"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment spec and write result CSV");
  run_cmd->add_option("--spec", run.spec, "Experiment spec (key = value)")->required();
  run_cmd->add_option("--out", run.out, "Result CSV path (default: stdout)");
  run_cmd->add_option("--seed", run.seed, "Override the base seed");
  run_cmd->add_option("--jobs", run.jobs, "Concurrent trials");
  run_cmd->add_option("--dump-history", run.dump_history, "JSON-lines epoch history");
  run_cmd->add_option("--dump-splits", run.dump_splits, "JSON split plans of st methods");
  run_cmd->add_option("--checkpoint-dir", run.checkpoint_dir,
                      "Write the best trial of each method as <method>.json");

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Build and validate a split plan");
  plan_cmd->add_option("--spec", plan.spec, "Experiment spec");
  plan_cmd->add_option("--train", plan.train, "Train JSON-lines file");
  plan_cmd->add_option("--k", plan.k, "Number of splits");
  plan_cmd->add_option("--eta", plan.eta, "Minority allotment ratio, e.g. 1:1");
  plan_cmd->add_option("--seed", plan.seed, "Sampling seed");
  plan_cmd->add_option("--dump-splits", plan.dump_splits, "Output JSON (default: stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a test file");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint bundle")->required();
  eval_cmd->add_option("--test", eval.test, "Test JSON-lines file")->required();
  eval_cmd->add_option("--out", eval.out, "Write a one-row result CSV");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset and lexicon");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--classes", synth.classes, "Number of classes");
  synth_cmd->add_option("--pool", synth.pool, "Train examples per class");
  synth_cmd->add_option("--val", synth.val, "Validation examples per class");
  synth_cmd->add_option("--test", synth.test, "Test examples per class");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*plan_cmd) return plan_command(plan);
    if (*eval_cmd) return eval_command(eval);
    if (*synth_cmd) return synth_command(synth);
  } catch (const std::exception& e) {
    std::cerr << "seqtarget: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
