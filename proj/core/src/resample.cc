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

#include "seqtarget/resample.h"

#include <algorithm>

#include "seqtarget/errors.h"
#include "seqtarget/random.h"

namespace seqtarget {
namespace {

void require_all_classes(const std::vector<std::size_t>& counts) {
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw DataError("class " + std::to_string(c) + " has no examples");
    }
  }
}

}  // namespace

Dataset ros(const Dataset& d, std::uint64_t seed) {
  if (d.empty()) throw DataError("empty dataset");
  const auto counts = d.class_counts();
  require_all_classes(counts);
  const std::size_t target = *std::max_element(counts.begin(), counts.end());

  const auto by_class = d.indices_by_class();
  std::vector<LabeledExample> out = d.examples();
  out.reserve(target * counts.size());
  Rng rng(seed);
  for (const auto& members : by_class) {
    for (std::size_t n = members.size(); n < target; ++n) {
      out.push_back(d[members[uniform_index(rng, members.size())]]);
    }
  }
  return Dataset(std::move(out), d.label_map(), d.role());
}

Dataset rus(const Dataset& d, std::uint64_t seed) {
  if (d.empty()) throw DataError("empty dataset");
  const auto counts = d.class_counts();
  require_all_classes(counts);
  const std::size_t target = *std::min_element(counts.begin(), counts.end());

  auto by_class = d.indices_by_class();
  Rng rng(seed);
  std::vector<std::size_t> keep;
  keep.reserve(target * counts.size());
  for (auto& members : by_class) {
    shuffle(std::span(members), rng);
    keep.insert(keep.end(), members.begin(),
                members.begin() + static_cast<std::ptrdiff_t>(target));
  }
  std::sort(keep.begin(), keep.end());
  return d.subset(keep);
}

}  // namespace seqtarget
