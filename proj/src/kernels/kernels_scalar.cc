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

#include <cstddef>

#include "dppoison/kernels.h"

namespace dppoison::kernels::scalar {

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum;
}

double WeightedDot(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * a[j] * b[j];
  return sum;
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t j = 0; j < x.size(); ++j) y[j] += alpha * x[j];
}

}  // namespace dppoison::kernels::scalar
