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

#ifndef DPPOISON_KERNELS_H_
#define DPPOISON_KERNELS_H_

#include <span>

// Reduction kernels over per-item columns. Every solver and gradient inner
// loop in the library is phrased as one of these three primitives over a
// column-major design matrix (see design_matrix.h).
//
// Each kernel has a portable scalar reference and, on x86-64, an AVX2+FMA
// variant. The variant is picked once per process from CPUID; setting the
// environment variable DPPOISON_FORCE_SCALAR=1 pins the scalar path. Results of
// the two paths agree to rounding (summation order differs), so bit-exact
// reproducibility holds per machine and per dispatch choice.

namespace dppoison::kernels {

enum class Isa { kScalar, kAvx2 };

// sum_j a[j] * b[j]
double Dot(std::span<const double> a, std::span<const double> b);
// sum_j w[j] * a[j] * b[j]
double WeightedDot(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b);
// y[j] += alpha * x[j]
void Axpy(double alpha, std::span<const double> x, std::span<double> y);

Isa ActiveIsa();
const char* IsaName(Isa isa);
// True when the CPU and the build both support `isa`.
bool IsaAvailable(Isa isa);

namespace scalar {
double Dot(std::span<const double> a, std::span<const double> b);
double WeightedDot(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace scalar

#if defined(DPPOISON_HAS_AVX2)
namespace avx2 {
double Dot(std::span<const double> a, std::span<const double> b);
double WeightedDot(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace dppoison::kernels

#endif  // DPPOISON_KERNELS_H_
