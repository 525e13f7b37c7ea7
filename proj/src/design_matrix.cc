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

#include "dppoison/design_matrix.h"

#include <algorithm>

#include "dppoison/kernels.h"

namespace dppoison {

DesignMatrix::DesignMatrix(const Dataset& data)
    : rows_(data.size()),
      cols_(data.dim),
      values_(static_cast<std::size_t>(data.size()) * data.dim),
      labels_(data.size()) {
  for (int j = 0; j < rows_; ++j) {
    const LabeledItem& item = data.items[j];
    for (int c = 0; c < cols_; ++c) {
      values_[static_cast<std::size_t>(c) * rows_ + j] = item.x[c];
    }
    labels_[j] = item.y;
  }
}

void DesignMatrix::Margins(const Vector& theta, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (int c = 0; c < cols_; ++c) kernels::Axpy(theta[c], column(c), out);
}

Vector DesignMatrix::WeightedSum(std::span<const double> w) const {
  Vector out(cols_);
  for (int c = 0; c < cols_; ++c) out[c] = kernels::Dot(w, column(c));
  return out;
}

Matrix DesignMatrix::WeightedGram(std::span<const double> w,
                                  double lambda) const {
  Matrix out(cols_, cols_);
  for (int a = 0; a < cols_; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double v = kernels::WeightedDot(w, column(a), column(b));
      out(a, b) = v;
      out(b, a) = v;
    }
    out(a, a) += lambda;
  }
  return out;
}

Matrix DesignMatrix::Gram(double lambda) const {
  Matrix out(cols_, cols_);
  for (int a = 0; a < cols_; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double v = kernels::Dot(column(a), column(b));
      out(a, b) = v;
      out(b, a) = v;
    }
    out(a, a) += lambda;
  }
  return out;
}

}  // namespace dppoison
