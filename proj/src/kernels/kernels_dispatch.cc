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

#include <cstdlib>
#include <cstring>

#include "dppoison/kernels.h"

namespace dppoison::kernels {
namespace {

struct KernelTable {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*weighted_dot)(std::span<const double>, std::span<const double>,
                         std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
};

bool ForceScalar() {
  const char* env = std::getenv("DPPOISON_FORCE_SCALAR");
  return env != nullptr && std::strcmp(env, "") != 0 &&
         std::strcmp(env, "0") != 0;
}

KernelTable SelectTable() {
#if defined(DPPOISON_HAS_AVX2)
  if (!ForceScalar() && IsaAvailable(Isa::kAvx2)) {
    return {Isa::kAvx2, &avx2::Dot, &avx2::WeightedDot, &avx2::Axpy};
  }
#endif
  return {Isa::kScalar, &scalar::Dot, &scalar::WeightedDot, &scalar::Axpy};
}

const KernelTable& Table() {
  static const KernelTable table = SelectTable();
  return table;
}

}  // namespace

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(DPPOISON_HAS_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const char* IsaName(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

Isa ActiveIsa() { return Table().isa; }

double Dot(std::span<const double> a, std::span<const double> b) {
  return Table().dot(a, b);
}

double WeightedDot(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b) {
  return Table().weighted_dot(w, a, b);
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  Table().axpy(alpha, x, y);
}

}  // namespace dppoison::kernels
