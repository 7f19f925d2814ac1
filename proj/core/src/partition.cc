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

#include "seqtarget/partition.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "seqtarget/errors.h"
#include "seqtarget/random.h"

namespace seqtarget {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::size_t> resolved_eta(const SplitConfig& cfg) {
  if (cfg.eta.empty()) return std::vector<std::size_t>(cfg.k, 1);
  return cfg.eta;
}

// Per-class quota that follows the target exactly: the largest scale S with
// floor(S * t_c) <= n_c for every class.
std::vector<std::size_t> target_quota(std::span<const std::size_t> counts,
                                      const ClassDistribution& target) {
  const std::size_t p = counts.size();
  const double t0 = target[0];
  const bool uniform = std::all_of(target.probs().begin(), target.probs().end(),
                                   [&](double t) { return t == t0; });
  if (uniform) {
    const std::size_t m = *std::min_element(counts.begin(), counts.end());
    return std::vector<std::size_t>(p, m);
  }
  double scale = INFINITY;
  for (std::size_t c = 0; c < p; ++c) {
    if (target[c] > 0.0) {
      scale = std::min(scale, static_cast<double>(counts[c]) / target[c]);
    }
  }
  std::vector<std::size_t> quota(p, 0);
  for (std::size_t c = 0; c < p; ++c) {
    quota[c] = std::min(counts[c], static_cast<std::size_t>(
                                       std::floor(scale * target[c] + 1e-9)));
  }
  return quota;
}

// Solves sum_i base[i] * q^(k-1-i) = total for q >= 1, i over the first k-1
// splits (0-based). Returns 1 when no surplus.
double solve_growth(std::span<const std::size_t> base, double total) {
  const std::size_t lead = base.size();
  auto mass = [&](double q) {
    double s = 0.0;
    for (std::size_t i = 0; i < lead; ++i) {
      s += static_cast<double>(base[i]) *
           std::pow(q, static_cast<double>(lead - i));
    }
    return s;
  };
  if (mass(1.0) >= total) return 1.0;
  // Nothing to scale; the caller assigns the whole surplus to the first split.
  if (std::all_of(base.begin(), base.end(), [](std::size_t b) { return b == 0; })) {
    return 1.0;
  }
  double lo = 1.0;
  double hi = 2.0;
  while (mass(hi) < total) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < total ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

void SplitConfig::validate() const {
  if (k < 2) throw ConfigError("split count k must be >= 2");
  if (!eta.empty()) {
    if (eta.size() != k) {
      throw ConfigError("eta has " + std::to_string(eta.size()) +
                        " entries, expected k = " + std::to_string(k));
    }
    if (std::any_of(eta.begin(), eta.end(), [](std::size_t e) { return e == 0; })) {
      throw ConfigError("eta entries must be >= 1");
    }
  }
}

double split_kl(const IndexSet& split, const Dataset& d,
                const TargetDistribution& target) {
  std::vector<std::size_t> counts(d.num_classes(), 0);
  for (std::size_t i : split) ++counts[d[i].label];
  return kl_divergence(target.dist, ClassDistribution::from_counts(counts));
}

std::vector<IndexSet> sort_splits(std::vector<IndexSet> splits, const Dataset& d,
                                  const TargetDistribution& target) {
  std::vector<std::pair<double, IndexSet>> keyed;
  keyed.reserve(splits.size());
  for (auto& s : splits) {
    const double kl = split_kl(s, d, target);
    keyed.emplace_back(kl, std::move(s));
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<IndexSet> out;
  out.reserve(keyed.size());
  for (auto& [kl, s] : keyed) out.push_back(std::move(s));
  return out;
}

SplitPlan plan_splits(const Dataset& d, const SplitConfig& cfg,
                      std::uint64_t seed) {
  cfg.validate();
  const std::size_t k = cfg.k;
  const std::size_t p = d.num_classes();
  const auto eta = resolved_eta(cfg);
  const std::size_t eta_sum = std::accumulate(eta.begin(), eta.end(), std::size_t{0});
  const TargetDistribution target =
      cfg.target ? *cfg.target : TargetDistribution::uniform(p);
  if (target.dist.size() != p) {
    throw ConfigError("target distribution has " +
                      std::to_string(target.dist.size()) + " classes, dataset has " +
                      std::to_string(p));
  }

  const auto counts = d.class_counts();
  for (ClassId c = 0; c < p; ++c) {
    if (counts[c] < k) {
      throw DataError("class '" + d.label_map().name(c) + "' has " +
                      std::to_string(counts[c]) + " examples, fewer than k = " +
                      std::to_string(k));
    }
  }

  SplitPlan plan;
  plan.num_examples = d.size();
  const double whole_kl = kl_divergence(target.dist, ClassDistribution::from_counts(counts));
  if (whole_kl <= 1e-12) {
    IndexSet all(d.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    plan.splits.push_back(std::move(all));
    plan.kls.push_back(whole_kl);
    plan.advisory = "data already matches target; training as a single task";
    return plan;
  }

  // alloc[c][i]: examples of class c in split i.
  const auto quota = target_quota(counts, target.dist);
  std::vector<std::vector<std::size_t>> alloc(p, std::vector<std::size_t>(k, 0));
  for (ClassId c = 0; c < p; ++c) {
    std::vector<std::size_t> base(k, 0);
    std::size_t rest = quota[c];
    for (std::size_t i = 1; i < k; ++i) {
      base[i] = quota[c] * eta[i] / eta_sum;
      rest -= base[i];
    }
    base[0] = rest;

    alloc[c][k - 1] = base[k - 1];
    const double surplus_total = static_cast<double>(counts[c] - base[k - 1]);
    const double growth =
        solve_growth(std::span(base).first(k - 1), surplus_total);
    std::size_t placed = base[k - 1];
    for (std::size_t i = 1; i + 1 < k; ++i) {
      alloc[c][i] = static_cast<std::size_t>(std::floor(
          static_cast<double>(base[i]) *
          std::pow(growth, static_cast<double>(k - 1 - i))));
      placed += alloc[c][i];
    }
    alloc[c][0] = counts[c] - placed;
  }

  // Seeded text-keyed ranking inside each class; the final split draws first.
  auto by_class = d.indices_by_class();
  plan.splits.assign(k, {});
  for (ClassId c = 0; c < p; ++c) {
    auto& members = by_class[c];
    std::vector<std::pair<std::uint64_t, std::size_t>> ranked;
    ranked.reserve(members.size());
    for (std::size_t i : members) {
      ranked.emplace_back(mix64(fnv1a(d[i].text) ^ mix64(seed)), i);
    }
    std::sort(ranked.begin(), ranked.end());
    std::size_t cursor = 0;
    for (std::size_t s = k; s-- > 0;) {
      for (std::size_t n = 0; n < alloc[c][s]; ++n) {
        plan.splits[s].push_back(ranked[cursor++].second);
      }
    }
  }
  for (auto& s : plan.splits) std::sort(s.begin(), s.end());

  plan.splits = sort_splits(std::move(plan.splits), d, target);
  for (const auto& s : plan.splits) plan.kls.push_back(split_kl(s, d, target));
  for (std::size_t i = 1; i < plan.kls.size(); ++i) {
    if (!(plan.kls[i - 1] > plan.kls[i])) {
      throw OrderingError("ordering violated: split " + std::to_string(i) +
                          " KL " + std::to_string(plan.kls[i - 1]) +
                          " is not above split " + std::to_string(i + 1) +
                          " KL " + std::to_string(plan.kls[i]));
    }
  }
  return plan;
}

ValidationReport validate_sequence(const SplitPlan& plan) {
  ValidationReport report;
  auto fail = [&](std::string what) {
    report.ok = false;
    if (std::find(report.violations.begin(), report.violations.end(), what) ==
        report.violations.end()) {
      report.violations.push_back(std::move(what));
    }
  };

  if (plan.splits.empty()) fail("empty plan");
  if (plan.kls.size() != plan.splits.size()) fail("shape");

  std::vector<unsigned char> seen(plan.num_examples, 0);
  for (const auto& split : plan.splits) {
    if (split.empty()) fail("empty split");
    for (std::size_t i : split) {
      if (i >= plan.num_examples) {
        fail("coverage");
        continue;
      }
      if (seen[i]) fail("disjointness");
      seen[i] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) fail("coverage");

  for (std::size_t i = 1; i < plan.kls.size(); ++i) {
    if (!(plan.kls[i - 1] > plan.kls[i])) fail("ordering");
  }
  report.final_matches_target = !plan.kls.empty() && plan.kls.back() <= 1e-9;
  return report;
}

nlohmann::json to_json(const SplitPlan& plan) {
  nlohmann::json j;
  j["num_examples"] = plan.num_examples;
  j["splits"] = plan.splits;
  j["kls"] = plan.kls;
  j["advisory"] = plan.advisory ? nlohmann::json(*plan.advisory) : nlohmann::json();
  return j;
}

SplitPlan split_plan_from_json(const nlohmann::json& j) {
  SplitPlan plan;
  try {
    plan.num_examples = j.at("num_examples").get<std::size_t>();
    plan.splits = j.at("splits").get<std::vector<IndexSet>>();
    plan.kls = j.at("kls").get<std::vector<double>>();
    if (j.contains("advisory") && j["advisory"].is_string()) {
      plan.advisory = j["advisory"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad split plan: ") + e.what(), 0);
  }
  return plan;
}

}  // namespace seqtarget
