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

#ifndef DPPOISON_DESIGN_MATRIX_H_
#define DPPOISON_DESIGN_MATRIX_H_

#include <span>
#include <vector>

#include "dppoison/types.h"

namespace dppoison {

// Column-major copy of a dataset: feature c of every item is contiguous, so
// margins, gradient sums and Gram entries become the dense reductions in
// kernels.h.
class DesignMatrix {
 public:
  explicit DesignMatrix(const Dataset& data);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::span<const double> column(int c) const {
    return {values_.data() + static_cast<std::size_t>(c) * rows_,
            static_cast<std::size_t>(rows_)};
  }
  std::span<const double> labels() const { return labels_; }

  // out[j] = x_j . theta
  void Margins(const Vector& theta, std::span<double> out) const;
  // sum_j w[j] x_j
  Vector WeightedSum(std::span<const double> w) const;
  // lambda I + sum_j w[j] x_j x_j^T
  Matrix WeightedGram(std::span<const double> w, double lambda) const;
  // X^T X + lambda I
  Matrix Gram(double lambda) const;

 private:
  int rows_;
  int cols_;
  std::vector<double> values_;
  std::vector<double> labels_;
};

}  // namespace dppoison

#endif  // DPPOISON_DESIGN_MATRIX_H_
