//
// Copyright 2026 The dppoison Authors.
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
//

#ifndef DPPOISON_RNG_H_
#define DPPOISON_RNG_H_

#include <cstdint>
#include <random>

namespace dppoison {

using RandomStream = std::mt19937_64;

// Independent stream identifiers. Every consumer of randomness gets its own
// stream keyed by (seed, purpose, index); streams are never shared.
enum class StreamPurpose : std::uint64_t {
  kData = 1,
  kEvalSet = 2,
  kAttackStep = 3,
  kRelaxedStep = 4,
  kShallowSelect = 5,
  kCostEstimate = 6,
  kTest = 7,
};

RandomStream DeriveStream(std::uint64_t seed, StreamPurpose purpose,
                          std::uint64_t index = 0);

}  // namespace dppoison

#endif  // DPPOISON_RNG_H_
