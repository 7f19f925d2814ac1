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

#include "seqtarget/featurizer.h"

#include <algorithm>
#include <cctype>
#include <map>

#include <nlohmann/json.hpp>

#include "seqtarget/errors.h"

namespace seqtarget {
namespace {

bool is_separator(unsigned char ch) {
  if (ch >= 0x80) return false;
  return std::isspace(ch) || std::ispunct(ch);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char ch : text) {
    if (is_separator(ch)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<unsigned char>(ch - 'A' + 'a');
    current.push_back(static_cast<char>(ch));
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::size_t max_size)
    : tokens_(std::move(tokens)), max_size_(max_size) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i + 2)).second) {
      throw DataError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

TokenId Vocabulary::lookup(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkToken : it->second;
}

Vocabulary build_vocab(const Dataset& train, const VocabOptions& options) {
  if (train.empty()) throw DataError("empty dataset");
  std::map<std::string, std::size_t> freq;
  for (const auto& ex : train.examples()) {
    for (auto& token : tokenize(ex.text)) ++freq[std::move(token)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [token, count] : freq) {
    if (count >= options.min_freq) ranked.emplace_back(token, count);
  }
  // freq is ordered, so stable_sort on count keeps lexicographic tie order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > options.max_size) ranked.resize(options.max_size);
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [token, count] : ranked) tokens.push_back(std::move(token));
  return Vocabulary(std::move(tokens), options.max_size);
}

FeatureVector encode(std::string_view text, const Vocabulary& v, std::size_t max_len) {
  FeatureVector out;
  out.ids.assign(max_len, kPadToken);
  std::size_t n = 0;
  for (const auto& token : tokenize(text)) {
    if (n == max_len) break;
    out.ids[n++] = v.lookup(token);
  }
  return out;
}

EncodedDataset encode_dataset(const Dataset& d, const Vocabulary& v,
                              std::size_t max_len) {
  EncodedDataset out;
  out.num_classes = d.num_classes();
  out.features.reserve(d.size());
  out.labels.reserve(d.size());
  for (const auto& ex : d.examples()) {
    out.features.push_back(encode(ex.text, v, max_len));
    out.labels.push_back(ex.label);
  }
  return out;
}

nlohmann::json to_json(const Vocabulary& v) {
  return {{"max_size", v.max_size()}, {"tokens", v.tokens()}};
}

Vocabulary vocabulary_from_json(const nlohmann::json& j) {
  try {
    return Vocabulary(j.at("tokens").get<std::vector<std::string>>(),
                      j.at("max_size").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad vocabulary: ") + e.what(), 0);
  }
}

}  // namespace seqtarget
