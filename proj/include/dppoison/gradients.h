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

#ifndef DPPOISON_GRADIENTS_H_
#define DPPOISON_GRADIENTS_H_

#include <optional>
#include <utility>

#include "absl/status/statusor.h"
#include "dppoison/learners.h"
#include "dppoison/noise.h"
#include "dppoison/types.h"

// Gradients of the attack cost C(M(D~, b)) with respect to one training item
// at fixed noise b, obtained by implicit differentiation of the learner's
// optimality conditions:
//
//   dC/dz_i = (d theta / d z_i)^T dC/dtheta,
//   d theta / d z_i = -(df/dtheta)^{-1} df/dz_i,
//
// where f is the KKT residual. The ridge dual mu is held fixed under
// differentiation, so gradients are exact where the norm constraint is
// inactive and a first-order approximation where it is active.

namespace dppoison {

struct ItemGradient {
  Vector d_features;
  std::optional<double> d_label;  // Present for ridge victims only.

  // Norm of (d_features, d_label).
  double Norm() const;
};

// dC/dtheta at `model`.
absl::StatusOr<Vector> CostGradient(const CostSpec& cost,
                                    const ModelParams& model);
Vector CostGradientUnchecked(const CostSpec& cost, const Vector& theta);

// The item-independent part of the implicit gradient, factored once per
// trained model: v = (df/dtheta)^{-1} cost_grad. ForItem() then costs O(d).
class ItemGradientSystem {
 public:
  // `model` must be M(data, noise) for `victim`; `noise` is only read for
  // output perturbation, where the base model is model.theta - noise.b.
  static absl::StatusOr<ItemGradientSystem> Create(const VictimSpec& victim,
                                                   const Dataset& data,
                                                   const ModelParams& model,
                                                   const NoiseSample& noise,
                                                   const Vector& cost_grad);

  ItemGradient ForItem(const LabeledItem& item) const;
  ItemGradient ForItem(const Dataset& data, int i) const {
    return ForItem(data.items[i]);
  }

 private:
  ItemGradientSystem(BaseLearner base, Vector inner_theta, Vector solved)
      : base_(base),
        inner_theta_(std::move(inner_theta)),
        solved_(std::move(solved)) {}

  BaseLearner base_;
  // theta~ for objective perturbation, theta~ - b for output perturbation.
  Vector inner_theta_;
  // (df/dtheta)^{-1} cost_grad.
  Vector solved_;
};

// Per-victim entry points. Each factors the system for a single item; use
// ItemGradientSystem directly when many items share one model.
absl::StatusOr<ItemGradient> GradObjectiveLogistic(const Dataset& data, int i,
                                                   const ModelParams& model,
                                                   double lambda,
                                                   const Vector& cost_grad);
absl::StatusOr<ItemGradient> GradObjectiveRidge(const Dataset& data, int i,
                                                const ModelParams& model,
                                                double lambda,
                                                const Vector& cost_grad);
absl::StatusOr<ItemGradient> GradOutputLogistic(const Dataset& data, int i,
                                                const ModelParams& model,
                                                const NoiseSample& noise,
                                                double lambda,
                                                const Vector& cost_grad);
absl::StatusOr<ItemGradient> GradOutputRidge(const Dataset& data, int i,
                                             const ModelParams& model,
                                             const NoiseSample& noise,
                                             double lambda,
                                             const Vector& cost_grad);

// Central finite differences of C(M(D~, b)) in the coordinates of item i
// (features, plus the label for ridge victims), retraining the victim with the
// same b at every perturbed point. h must lie in [1e-6, 1e-4].
absl::StatusOr<ItemGradient> FiniteDifferenceOracle(
    const VictimSpec& victim, const Dataset& data, int i,
    const NoiseSample& noise, const CostSpec& cost, double h,
    const SolverSettings& settings = {});

}  // namespace dppoison

#endif  // DPPOISON_GRADIENTS_H_
