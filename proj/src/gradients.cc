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

#include "dppoison/gradients.h"

#include <cmath>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "dppoison/core.h"
#include "dppoison/design_matrix.h"

namespace dppoison {

double ItemGradient::Norm() const {
  const double label = d_label.value_or(0.0);
  return std::sqrt(d_features.squaredNorm() + label * label);
}

Vector CostGradientUnchecked(const CostSpec& cost, const Vector& theta) {
  if (cost.goal == AttackGoal::kParameterTargeting) {
    return theta - cost.target_model;
  }
  Vector grad = Vector::Zero(theta.size());
  for (const LabeledItem& item : cost.eval_set.items) {
    const double pred = item.x.dot(theta);
    if (cost.loss == EvalLoss::kLogistic) {
      grad -= (item.y * SigmoidNeg(item.y * pred)) * item.x;
    } else {
      grad += (pred - item.y) * item.x;
    }
  }
  grad /= static_cast<double>(cost.eval_set.size());
  if (cost.goal == AttackGoal::kLabelAversion) grad = -grad;
  return grad;
}

absl::StatusOr<Vector> CostGradient(const CostSpec& cost,
                                    const ModelParams& model) {
  if (absl::Status s = ValidateCost(cost, static_cast<int>(model.theta.size()));
      !s.ok()) {
    return s;
  }
  return CostGradientUnchecked(cost, model.theta);
}

absl::StatusOr<ItemGradientSystem> ItemGradientSystem::Create(
    const VictimSpec& victim, const Dataset& data, const ModelParams& model,
    const NoiseSample& noise, const Vector& cost_grad) {
  const int d = data.dim;
  if (model.theta.size() != d || cost_grad.size() != d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model/cost gradient dimension does not match data dimension ", d));
  }
  Vector inner = model.theta;
  if (victim.mechanism == Mechanism::kOutputPerturbation) {
    if (noise.dim() != d) {
      return absl::InvalidArgumentError("noise dimension mismatch");
    }
    inner -= noise.b;
  }

  const DesignMatrix x(data);
  Matrix system;
  if (victim.base == BaseLearner::kLogistic) {
    std::vector<double> margins(data.size());
    x.Margins(inner, margins);
    const auto y = x.labels();
    for (int j = 0; j < data.size(); ++j) {
      const double m = y[j] * margins[j];
      margins[j] = SigmoidNeg(m) * SigmoidNeg(-m);  // s / (1 + s)^2
    }
    system = x.WeightedGram(margins, victim.lambda);
  } else {
    system = x.Gram(victim.lambda + model.mu);
  }
  const Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    return absl::InternalError("implicit-gradient system is not positive definite");
  }
  return ItemGradientSystem(victim.base, std::move(inner),
                            llt.solve(cost_grad));
}

ItemGradient ItemGradientSystem::ForItem(const LabeledItem& item) const {
  const double xv = item.x.dot(solved_);
  if (base_ == BaseLearner::kLogistic) {
    // (y_i/(1+s_i) I - s_i theta x_i^T / (1+s_i)^2) v
    const double m = item.y * item.x.dot(inner_theta_);
    const double lead = item.y * SigmoidNeg(m);
    const double curv = SigmoidNeg(m) * SigmoidNeg(-m);
    return {lead * solved_ - (curv * xv) * inner_theta_, std::nullopt};
  }
  // -(theta x_i^T + (x_i.theta - y_i) I) v  and  x_i^T v
  const double residual = item.x.dot(inner_theta_) - item.y;
  return {-(xv * inner_theta_ + residual * solved_), xv};
}

namespace {

absl::StatusOr<ItemGradient> SingleItem(Mechanism mechanism, BaseLearner base,
                                        const Dataset& data, int i,
                                        const ModelParams& model,
                                        const NoiseSample& noise,
                                        double lambda,
                                        const Vector& cost_grad) {
  if (i < 0 || i >= data.size()) {
    return absl::OutOfRangeError(absl::StrCat("item index ", i));
  }
  VictimSpec victim;
  victim.mechanism = mechanism;
  victim.base = base;
  victim.lambda = lambda;
  absl::StatusOr<ItemGradientSystem> system =
      ItemGradientSystem::Create(victim, data, model, noise, cost_grad);
  if (!system.ok()) return system.status();
  return system->ForItem(data, i);
}

}  // namespace

absl::StatusOr<ItemGradient> GradObjectiveLogistic(const Dataset& data, int i,
                                                   const ModelParams& model,
                                                   double lambda,
                                                   const Vector& cost_grad) {
  return SingleItem(Mechanism::kObjectivePerturbation, BaseLearner::kLogistic,
                    data, i, model, NoiseSample::Zero(data.dim), lambda,
                    cost_grad);
}

absl::StatusOr<ItemGradient> GradObjectiveRidge(const Dataset& data, int i,
                                                const ModelParams& model,
                                                double lambda,
                                                const Vector& cost_grad) {
  return SingleItem(Mechanism::kObjectivePerturbation, BaseLearner::kRidge,
                    data, i, model, NoiseSample::Zero(data.dim), lambda,
                    cost_grad);
}

absl::StatusOr<ItemGradient> GradOutputLogistic(const Dataset& data, int i,
                                                const ModelParams& model,
                                                const NoiseSample& noise,
                                                double lambda,
                                                const Vector& cost_grad) {
  return SingleItem(Mechanism::kOutputPerturbation, BaseLearner::kLogistic,
                    data, i, model, noise, lambda, cost_grad);
}

absl::StatusOr<ItemGradient> GradOutputRidge(const Dataset& data, int i,
                                             const ModelParams& model,
                                             const NoiseSample& noise,
                                             double lambda,
                                             const Vector& cost_grad) {
  return SingleItem(Mechanism::kOutputPerturbation, BaseLearner::kRidge, data,
                    i, model, noise, lambda, cost_grad);
}

absl::StatusOr<ItemGradient> FiniteDifferenceOracle(
    const VictimSpec& victim, const Dataset& data, int i,
    const NoiseSample& noise, const CostSpec& cost, double h,
    const SolverSettings& settings) {
  if (!(h >= 1e-6 && h <= 1e-4)) {
    return absl::InvalidArgumentError("finite-difference step must be in [1e-6, 1e-4]");
  }
  if (i < 0 || i >= data.size()) {
    return absl::OutOfRangeError(absl::StrCat("item index ", i));
  }
  if (absl::Status s = ValidateCost(cost, data.dim); !s.ok()) return s;
  absl::StatusOr<ModelParams> center =
      TrainMechanism(victim, data, noise, settings);
  if (!center.ok()) return center.status();
  const Vector warm = victim.mechanism == Mechanism::kOutputPerturbation
                          ? Vector(center->theta - noise.b)
                          : center->theta;

  Dataset probe = data;
  auto cost_at = [&]() -> absl::StatusOr<double> {
    absl::StatusOr<ModelParams> model =
        TrainMechanism(victim, probe, noise, settings, &warm);
    if (!model.ok()) return model.status();
    return EvalCostUnchecked(cost, model->theta);
  };
  auto central = [&](double& coordinate) -> absl::StatusOr<double> {
    const double original = coordinate;
    coordinate = original + h;
    absl::StatusOr<double> plus = cost_at();
    coordinate = original - h;
    absl::StatusOr<double> minus = cost_at();
    coordinate = original;
    if (!plus.ok()) return plus.status();
    if (!minus.ok()) return minus.status();
    return (*plus - *minus) / (2.0 * h);
  };

  ItemGradient out{Vector(data.dim), std::nullopt};
  for (int c = 0; c < data.dim; ++c) {
    absl::StatusOr<double> g = central(probe.items[i].x[c]);
    if (!g.ok()) return g.status();
    out.d_features[c] = *g;
  }
  if (victim.base == BaseLearner::kRidge) {
    absl::StatusOr<double> g = central(probe.items[i].y);
    if (!g.ok()) return g.status();
    out.d_label = *g;
  }
  return out;
}

}  // namespace dppoison
