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

#include "seqtarget/augment.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "seqtarget/errors.h"
#include "seqtarget/random.h"

namespace seqtarget {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::size_t> covered_positions(const std::vector<std::string>& tokens,
                                           const SynonymLexicon& lex) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (lex.covers(tokens[i])) out.push_back(i);
  }
  return out;
}

const std::string& pick(const std::vector<std::string>& options, Rng& rng) {
  return options[uniform_index(rng, options.size())];
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

SynonymLexicon::SynonymLexicon(std::map<std::string, std::vector<std::string>> entries) {
  for (auto& [word, synonyms] : entries) {
    if (ascii_lower(word) != word) {
      throw DataError("lexicon key '" + word + "' is not lowercase");
    }
    std::erase_if(synonyms, [&](const std::string& s) {
      return s.empty() || ascii_lower(s) == word;
    });
    if (!synonyms.empty()) entries_.emplace(word, std::move(synonyms));
  }
}

const std::vector<std::string>* SynonymLexicon::find(std::string_view word) const {
  const auto it = entries_.find(ascii_lower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

SynonymLexicon read_lexicon(std::istream& in) {
  std::map<std::string, std::vector<std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tab = body.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("expected word<TAB>synonyms", line_no);
    }
    const std::string word = ascii_lower(trim(body.substr(0, tab)));
    if (word.empty()) throw ParseError("empty lexicon word", line_no);
    auto& synonyms = entries[word];
    std::string_view rest = body.substr(tab + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (!item.empty()) synonyms.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  return SynonymLexicon(std::move(entries));
}

SynonymLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file " + path.string());
  return read_lexicon(in);
}

void write_lexicon(std::ostream& out, const SynonymLexicon& lex) {
  for (const auto& [word, synonyms] : lex.entries()) {
    out << word << '\t';
    for (std::size_t i = 0; i < synonyms.size(); ++i) {
      if (i) out << ',';
      out << synonyms[i];
    }
    out << '\n';
  }
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string synonym_replacement(std::string_view text, int n,
                                const SynonymLexicon& lex, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("synonym_replacement: n must be >= 1");
  auto tokens = whitespace_tokens(text);
  auto candidates = covered_positions(tokens, lex);
  if (candidates.empty()) return std::string(text);
  Rng rng(seed);
  shuffle(std::span(candidates), rng);
  const auto limit = std::min(candidates.size(), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < limit; ++i) {
    auto& token = tokens[candidates[i]];
    token = pick(*lex.find(token), rng);
  }
  return join(tokens);
}

std::string random_insertion(std::string_view text, int n,
                             const SynonymLexicon& lex, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_insertion: n must be >= 1");
  auto tokens = whitespace_tokens(text);
  Rng rng(seed);
  for (int round = 0; round < n; ++round) {
    const auto candidates = covered_positions(tokens, lex);
    if (candidates.empty()) return std::string(text);
    const auto& source = tokens[candidates[uniform_index(rng, candidates.size())]];
    std::string synonym = pick(*lex.find(source), rng);
    const auto at = uniform_index(rng, tokens.size() + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), std::move(synonym));
  }
  return join(tokens);
}

std::string random_swap(std::string_view text, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_swap: n must be >= 1");
  auto tokens = whitespace_tokens(text);
  if (tokens.size() < 2) {
    throw std::invalid_argument("random_swap: need at least two tokens");
  }
  Rng rng(seed);
  for (int round = 0; round < n; ++round) {
    const auto i = uniform_index(rng, tokens.size());
    auto j = uniform_index(rng, tokens.size() - 1);
    if (j >= i) ++j;
    std::swap(tokens[i], tokens[j]);
  }
  return join(tokens);
}

std::string random_deletion(std::string_view text, double p_del,
                            std::uint64_t seed) {
  if (!(p_del > 0.0 && p_del < 1.0)) {
    throw std::invalid_argument("random_deletion: p_del must be in (0, 1)");
  }
  const auto tokens = whitespace_tokens(text);
  if (tokens.empty()) {
    throw std::invalid_argument("random_deletion: need at least one token");
  }
  Rng rng(seed);
  std::vector<std::string> kept;
  for (const auto& token : tokens) {
    if (uniform_unit(rng) >= p_del) kept.push_back(token);
  }
  if (kept.empty()) kept.push_back(tokens[uniform_index(rng, tokens.size())]);
  return join(kept);
}

std::string_view to_string(EdaOp op) {
  switch (op) {
    case EdaOp::kSynonymReplacement:
      return "SR";
    case EdaOp::kRandomInsertion:
      return "RI";
    case EdaOp::kRandomSwap:
      return "RS";
    case EdaOp::kRandomDeletion:
      return "RD";
  }
  return "?";
}

EdaOp parse_eda_op(std::string_view name) {
  const std::string upper = [&] {
    std::string s(trim(name));
    for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
  }();
  if (upper == "SR") return EdaOp::kSynonymReplacement;
  if (upper == "RI") return EdaOp::kRandomInsertion;
  if (upper == "RS") return EdaOp::kRandomSwap;
  if (upper == "RD") return EdaOp::kRandomDeletion;
  throw ConfigError("unknown EDA op '" + std::string(name) + "'");
}

Dataset eda_oversample(const Dataset& d, std::span<const std::size_t> target_counts,
                       const SynonymLexicon& lex, const EdaOptions& options,
                       std::uint64_t seed) {
  if (options.ops.empty()) throw ConfigError("eda_oversample: no augmentation ops enabled");
  if (target_counts.size() != d.num_classes()) {
    throw ConfigError("eda_oversample: target_counts has " +
                      std::to_string(target_counts.size()) + " entries for " +
                      std::to_string(d.num_classes()) + " classes");
  }
  const auto by_class = d.indices_by_class();
  for (ClassId c = 0; c < by_class.size(); ++c) {
    if (target_counts[c] < by_class[c].size()) {
      throw ConfigError("eda_oversample: target below current count for class '" +
                        d.label_map().name(c) + "'");
    }
    if (target_counts[c] > by_class[c].size() && by_class[c].empty()) {
      throw DataError("eda_oversample: class '" + d.label_map().name(c) +
                      "' has no examples to augment");
    }
  }

  std::vector<LabeledExample> out = d.examples();
  Rng rng(seed);
  for (ClassId c = 0; c < by_class.size(); ++c) {
    const auto& members = by_class[c];
    for (std::size_t n = members.size(); n < target_counts[c]; ++n) {
      const auto& source = d[members[uniform_index(rng, members.size())]];
      const EdaOp op = options.ops[uniform_index(rng, options.ops.size())];
      const std::uint64_t op_seed = rng();
      std::string text;
      switch (op) {
        case EdaOp::kSynonymReplacement:
          text = synonym_replacement(source.text, options.n_per_op, lex, op_seed);
          break;
        case EdaOp::kRandomInsertion:
          text = random_insertion(source.text, options.n_per_op, lex, op_seed);
          break;
        case EdaOp::kRandomSwap:
          // Single-token texts have nothing to swap; keep them verbatim.
          text = whitespace_tokens(source.text).size() < 2
                     ? source.text
                     : random_swap(source.text, options.n_per_op, op_seed);
          break;
        case EdaOp::kRandomDeletion:
          text = random_deletion(source.text, options.p_del, op_seed);
          break;
      }
      out.push_back({std::move(text), c});
    }
  }
  return Dataset(std::move(out), d.label_map(), d.role());
}

}  // namespace seqtarget
