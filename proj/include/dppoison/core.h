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

#ifndef DPPOISON_CORE_H_
#define DPPOISON_CORE_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dppoison/types.h"

namespace dppoison {

// Checks that `cost` carries what its goal needs and that its target or
// evaluation set has dimension `dim`.
absl::Status ValidateCost(const CostSpec& cost, int dim);

// Attack cost C(theta):
//   ParameterTargeting  0.5 * ||theta - target||^2
//   LabelTargeting      mean loss over the evaluation set
//   LabelAversion       minus the LabelTargeting value
absl::StatusOr<double> EvalCost(const CostSpec& cost, const ModelParams& model);

// Same as EvalCost but skips validation. Hot loops validate once up front.
double EvalCostUnchecked(const CostSpec& cost, const Vector& theta);

// Radially rescales features onto the unit ball and clamps the label to
// [-1, 1]. Feasible items come back bit-identical.
LabeledItem ProjectItem(const LabeledItem& item);

// r(z~, z) = 0.5 ||x~ - x||^2, plus 0.5 (y~ - y)^2 for ridge victims.
absl::StatusOr<double> ModificationDistance(const LabeledItem& poisoned,
                                            const LabeledItem& clean,
                                            BaseLearner base);

// Numerically stable log(1 + exp(-m)).
double LogisticLoss(double margin);
// 1 / (1 + exp(m)), i.e. sigmoid(-m).
double SigmoidNeg(double margin);

}  // namespace dppoison

#endif  // DPPOISON_CORE_H_
