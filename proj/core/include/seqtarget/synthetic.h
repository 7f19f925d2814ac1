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

#ifndef SEQTARGET_SYNTHETIC_H_
#define SEQTARGET_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seqtarget/augment.h"
#include "seqtarget/corpus.h"

namespace seqtarget {

// Bag-of-words text generator for dataset-free runs. Every class owns a set
// of keywords; all classes share a Zipf-distributed noise vocabulary. Each
// token of a document is drawn from its own class keywords with probability
// signal_rate, from another class's keywords with probability cross_rate,
// and from the noise vocabulary otherwise.
struct SyntheticConfig {
  std::size_t num_classes = 2;
  std::size_t keywords_per_class = 60;
  std::size_t noise_vocab = 1500;
  std::size_t min_length = 12;
  std::size_t max_length = 30;
  double signal_rate = 0.10;
  double cross_rate = 0.04;
  double zipf_exponent = 1.0;
  // Shared by pool, validation and test draws so they use one vocabulary.
  std::uint64_t vocabulary_seed = 7;

  void validate() const;
};

// Class names are "c0" ... "c9"; at most ten classes so ids sort numerically.
LabelMap synthetic_labels(std::size_t num_classes);

// counts[c] documents of class c, classes interleaved in a seeded order.
Dataset generate_synthetic(const SyntheticConfig& cfg, std::span<const std::size_t> counts,
                           DatasetRole role, std::uint64_t seed);

// Lexicon pairing each keyword with three others of the same class and each
// noise word with two other noise words.
SynonymLexicon synthetic_lexicon(const SyntheticConfig& cfg);

}  // namespace seqtarget

#endif  // SEQTARGET_SYNTHETIC_H_
