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

#ifndef SEQTARGET_RESAMPLE_H_
#define SEQTARGET_RESAMPLE_H_

#include <cstdint>

#include "seqtarget/corpus.h"

namespace seqtarget {

// Random oversampling: every class is topped up to the largest class count
// with verbatim duplicates drawn uniformly with replacement. Originals come
// first, in their input order, followed by the duplicates.
Dataset ros(const Dataset& d, std::uint64_t seed);

// Random undersampling: every class is cut down to the smallest class count,
// sampled uniformly without replacement. Kept examples stay in input order.
Dataset rus(const Dataset& d, std::uint64_t seed);

}  // namespace seqtarget

#endif  // SEQTARGET_RESAMPLE_H_
