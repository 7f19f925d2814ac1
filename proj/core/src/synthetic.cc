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

#include "seqtarget/synthetic.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "seqtarget/errors.h"
#include "seqtarget/random.h"

namespace seqtarget {
namespace {

struct WordBank {
  std::vector<std::vector<std::string>> keywords;  // [class][rank]
  std::vector<std::string> noise;                  // [rank]
};

// Pronounceable consonant-vowel pseudo-words, unique across the bank.
WordBank make_bank(const SyntheticConfig& cfg) {
  static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  Rng rng(cfg.vocabulary_seed);
  std::set<std::string> used;
  auto fresh_word = [&] {
    for (;;) {
      const std::size_t syllables = 2 + uniform_index(rng, 3);
      std::string w;
      for (std::size_t s = 0; s < syllables; ++s) {
        w += kConsonants[uniform_index(rng, kConsonants.size())];
        w += kVowels[uniform_index(rng, kVowels.size())];
      }
      if (used.insert(w).second) return w;
    }
  };
  WordBank bank;
  bank.keywords.resize(cfg.num_classes);
  for (auto& words : bank.keywords) {
    for (std::size_t j = 0; j < cfg.keywords_per_class; ++j) words.push_back(fresh_word());
  }
  for (std::size_t j = 0; j < cfg.noise_vocab; ++j) bank.noise.push_back(fresh_word());
  return bank;
}

class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cdf_[r] = total;
    }
    for (double& c : cdf_) c /= total;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = uniform_unit(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                 cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

void SyntheticConfig::validate() const {
  if (num_classes < 2 || num_classes > 10) throw ConfigError("synthetic classes must be in [2, 10]");
  if (keywords_per_class == 0 || noise_vocab < 3) throw ConfigError("synthetic vocabulary too small");
  if (min_length == 0 || max_length < min_length) throw ConfigError("bad synthetic length range");
  if (!(signal_rate >= 0.0 && cross_rate >= 0.0 && signal_rate + cross_rate <= 1.0)) {
    throw ConfigError("synthetic signal/cross rates must be non-negative and sum to <= 1");
  }
}

LabelMap synthetic_labels(std::size_t num_classes) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < num_classes; ++c) names.push_back("c" + std::to_string(c));
  return LabelMap(std::move(names));
}

Dataset generate_synthetic(const SyntheticConfig& cfg, std::span<const std::size_t> counts,
                           DatasetRole role, std::uint64_t seed) {
  cfg.validate();
  if (counts.size() != cfg.num_classes) {
    throw ConfigError("generate_synthetic: expected " + std::to_string(cfg.num_classes) +
                      " class counts");
  }
  const WordBank bank = make_bank(cfg);
  const ZipfSampler keyword_rank(cfg.keywords_per_class, cfg.zipf_exponent);
  const ZipfSampler noise_rank(cfg.noise_vocab, cfg.zipf_exponent);
  const LabelMap labels = synthetic_labels(cfg.num_classes);

  std::vector<ClassId> order;
  for (ClassId c = 0; c < counts.size(); ++c) order.insert(order.end(), counts[c], c);
  Rng rng(seed);
  shuffle(std::span(order), rng);

  std::vector<LabeledExample> examples;
  examples.reserve(order.size());
  for (ClassId own : order) {
    const std::size_t length =
        cfg.min_length + uniform_index(rng, cfg.max_length - cfg.min_length + 1);
    std::string text;
    for (std::size_t t = 0; t < length; ++t) {
      const double u = uniform_unit(rng);
      const std::string* word;
      if (u < cfg.signal_rate) {
        word = &bank.keywords[own][keyword_rank(rng)];
      } else if (u < cfg.signal_rate + cfg.cross_rate) {
        ClassId other = uniform_index(rng, cfg.num_classes - 1);
        if (other >= own) ++other;
        word = &bank.keywords[other][keyword_rank(rng)];
      } else {
        word = &bank.noise[noise_rank(rng)];
      }
      if (t) text += ' ';
      text += *word;
    }
    examples.push_back({std::move(text), own});
  }
  return Dataset(std::move(examples), labels, role);
}

SynonymLexicon synthetic_lexicon(const SyntheticConfig& cfg) {
  cfg.validate();
  const WordBank bank = make_bank(cfg);
  std::map<std::string, std::vector<std::string>> entries;
  auto link = [&](const std::vector<std::string>& group, std::size_t fanout) {
    if (group.size() < 2) return;
    for (std::size_t i = 0; i < group.size(); ++i) {
      auto& synonyms = entries[group[i]];
      for (std::size_t s = 1; s <= fanout && s < group.size(); ++s) {
        synonyms.push_back(group[(i + s) % group.size()]);
      }
    }
  };
  for (const auto& words : bank.keywords) link(words, 3);
  link(bank.noise, 2);
  return SynonymLexicon(std::move(entries));
}

}  // namespace seqtarget
