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

#ifndef SEQTARGET_AUGMENT_H_
#define SEQTARGET_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqtarget/corpus.h"

namespace seqtarget {

// Lowercase word -> synonyms. Lookups lowercase the query.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;
  // Drops empty synonym lists and self-only entries. Throws DataError on a
  // key that is not lowercase.
  explicit SynonymLexicon(std::map<std::string, std::vector<std::string>> entries);

  const std::vector<std::string>* find(std::string_view word) const;
  bool covers(std::string_view word) const { return find(word) != nullptr; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<std::string>, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

// TSV: word<TAB>syn1,syn2,... per line. Blank lines and '#' comments skipped.
SynonymLexicon read_lexicon(std::istream& in);
SynonymLexicon load_lexicon(const std::filesystem::path& path);
void write_lexicon(std::ostream& out, const SynonymLexicon& lex);

// Augmentation works on whitespace tokens and rejoins with single spaces.
std::vector<std::string> whitespace_tokens(std::string_view text);

// Replaces up to n distinct lexicon-covered tokens with a random synonym.
std::string synonym_replacement(std::string_view text, int n,
                                const SynonymLexicon& lex, std::uint64_t seed);
// n times: insert a synonym of a random covered token at a random position.
std::string random_insertion(std::string_view text, int n,
                             const SynonymLexicon& lex, std::uint64_t seed);
// Swaps n random token pairs. Needs at least two tokens.
std::string random_swap(std::string_view text, int n, std::uint64_t seed);
// Drops each token with probability p_del; keeps one random token if all drop.
std::string random_deletion(std::string_view text, double p_del,
                            std::uint64_t seed);

enum class EdaOp { kSynonymReplacement, kRandomInsertion, kRandomSwap, kRandomDeletion };

std::string_view to_string(EdaOp op);
EdaOp parse_eda_op(std::string_view name);  // "SR", "RI", "RS", "RD"

struct EdaOptions {
  std::vector<EdaOp> ops = {EdaOp::kSynonymReplacement, EdaOp::kRandomInsertion};
  int n_per_op = 1;
  double p_del = 0.1;
};

// Tops every class up to target_counts[c] with augmented copies of uniformly
// drawn originals; each copy is produced by one randomly chosen enabled op.
// Originals come first, unchanged.
Dataset eda_oversample(const Dataset& d, std::span<const std::size_t> target_counts,
                       const SynonymLexicon& lex, const EdaOptions& options,
                       std::uint64_t seed);

}  // namespace seqtarget

#endif  // SEQTARGET_AUGMENT_H_
