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

#include "dppoison/rng.h"

namespace dppoison {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream DeriveStream(std::uint64_t seed, StreamPurpose purpose,
                          std::uint64_t index) {
  const std::uint64_t a = SplitMix64(seed);
  const std::uint64_t b = SplitMix64(a ^ static_cast<std::uint64_t>(purpose));
  const std::uint64_t c = SplitMix64(b ^ SplitMix64(index));
  std::seed_seq seq{static_cast<std::uint32_t>(c),
                    static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  return RandomStream(seq);
}

}  // namespace dppoison
