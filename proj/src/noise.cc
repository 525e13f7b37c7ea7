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

#include "dppoison/noise.h"

#include <random>

namespace dppoison {

NoiseSample SampleNoise(int dim, double scale, RandomStream& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector direction(dim);
  double norm = 0.0;
  do {
    for (int c = 0; c < dim; ++c) direction[c] = normal(rng);
    norm = direction.norm();
  } while (norm == 0.0);
  std::gamma_distribution<double> radius(static_cast<double>(dim), scale);
  return {direction * (radius(rng) / norm)};
}

double ResolveNoiseScale(const VictimSpec& victim, int n) {
  if (victim.noise_scale.has_value()) return *victim.noise_scale;
  if (victim.mechanism == Mechanism::kObjectivePerturbation) {
    return 2.0 / victim.epsilon;
  }
  return 2.0 / (n * victim.lambda * victim.epsilon);
}

}  // namespace dppoison
