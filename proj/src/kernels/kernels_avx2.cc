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

#include <immintrin.h>

#include <cstddef>

#include "dppoison/kernels.h"

namespace dppoison::kernels::avx2 {
namespace {

// Horizontal sum of four doubles.
inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double Dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[j]), _mm256_loadu_pd(&b[j]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[j + 4]),
                           _mm256_loadu_pd(&b[j + 4]), acc1);
  }
  for (; j + 4 <= n; j += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[j]), _mm256_loadu_pd(&b[j]), acc0);
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; j < n; ++j) sum += a[j] * b[j];
  return sum;
}

double WeightedDot(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b) {
  const std::size_t n = w.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    const __m256d wa0 =
        _mm256_mul_pd(_mm256_loadu_pd(&w[j]), _mm256_loadu_pd(&a[j]));
    const __m256d wa1 =
        _mm256_mul_pd(_mm256_loadu_pd(&w[j + 4]), _mm256_loadu_pd(&a[j + 4]));
    acc0 = _mm256_fmadd_pd(wa0, _mm256_loadu_pd(&b[j]), acc0);
    acc1 = _mm256_fmadd_pd(wa1, _mm256_loadu_pd(&b[j + 4]), acc1);
  }
  for (; j + 4 <= n; j += 4) {
    const __m256d wa =
        _mm256_mul_pd(_mm256_loadu_pd(&w[j]), _mm256_loadu_pd(&a[j]));
    acc0 = _mm256_fmadd_pd(wa, _mm256_loadu_pd(&b[j]), acc0);
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; j < n; ++j) sum += w[j] * a[j] * b[j];
  return sum;
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    _mm256_storeu_pd(&y[j], _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[j]),
                                            _mm256_loadu_pd(&y[j])));
  }
  for (; j < n; ++j) y[j] += alpha * x[j];
}

}  // namespace dppoison::kernels::avx2
