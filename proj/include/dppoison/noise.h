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

#ifndef DPPOISON_NOISE_H_
#define DPPOISON_NOISE_H_

#include "dppoison/rng.h"
#include "dppoison/types.h"

namespace dppoison {

// Mechanism noise b in R^d.
struct NoiseSample {
  Vector b;

  static NoiseSample Zero(int dim) { return {Vector::Zero(dim)}; }
  int dim() const { return static_cast<int>(b.size()); }
};

// Draws b = r * u with u uniform on the unit sphere and r ~ Gamma(dim, scale),
// i.e. a density proportional to exp(-||b|| / scale).
NoiseSample SampleNoise(int dim, double scale, RandomStream& rng);

// Radial noise scale of `victim` trained on `n` items: the explicit
// `noise_scale` when set, otherwise 2/epsilon for objective perturbation and
// 2/(n lambda epsilon) for output perturbation.
double ResolveNoiseScale(const VictimSpec& victim, int n);

}  // namespace dppoison

#endif  // DPPOISON_NOISE_H_
