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

#ifndef SEQTARGET_FEATURIZER_H_
#define SEQTARGET_FEATURIZER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqtarget/corpus.h"

namespace seqtarget {

using TokenId = std::uint32_t;

inline constexpr TokenId kPadToken = 0;
inline constexpr TokenId kUnkToken = 1;

// Lowercases ASCII letters and splits on whitespace and ASCII punctuation.
// Bytes >= 0x80 are kept, so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  // tokens[i] gets index i + 2; 0 and 1 are pad and unk.
  explicit Vocabulary(std::vector<std::string> tokens, std::size_t max_size = 0);

  std::size_t size() const { return tokens_.size() + 2; }
  std::size_t max_size() const { return max_size_; }
  TokenId lookup(std::string_view token) const;
  // Token text for an index >= 2.
  const std::string& token(TokenId id) const { return tokens_.at(id - 2); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.max_size_ == b.max_size_;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t max_size_;
  std::unordered_map<std::string, TokenId> index_;
};

struct VocabOptions {
  std::size_t max_size = 20000;
  std::size_t min_freq = 1;
};

// Top max_size tokens by frequency (ties lexicographic) with frequency at
// least min_freq.
Vocabulary build_vocab(const Dataset& train, const VocabOptions& options = {});

// Padded/truncated token ids; length is always max_len.
struct FeatureVector {
  std::vector<TokenId> ids;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector encode(std::string_view text, const Vocabulary& v, std::size_t max_len);

struct EncodedDataset {
  std::vector<FeatureVector> features;
  std::vector<ClassId> labels;
  std::size_t num_classes = 0;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
};

EncodedDataset encode_dataset(const Dataset& d, const Vocabulary& v,
                              std::size_t max_len);

nlohmann::json to_json(const Vocabulary& v);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

}  // namespace seqtarget

#endif  // SEQTARGET_FEATURIZER_H_
