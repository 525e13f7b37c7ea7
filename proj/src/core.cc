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

#include "dppoison/core.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace dppoison {

CostSpec ParameterTargetingCost(Vector target) {
  CostSpec cost;
  cost.goal = AttackGoal::kParameterTargeting;
  cost.target_model = std::move(target);
  return cost;
}

CostSpec LabelTargetingCost(Dataset eval_set, EvalLoss loss) {
  CostSpec cost;
  cost.goal = AttackGoal::kLabelTargeting;
  cost.loss = loss;
  cost.eval_set = std::move(eval_set);
  return cost;
}

CostSpec LabelAversionCost(Dataset eval_set, EvalLoss loss) {
  CostSpec cost = LabelTargetingCost(std::move(eval_set), loss);
  cost.goal = AttackGoal::kLabelAversion;
  return cost;
}

const char* MechanismName(Mechanism m) {
  return m == Mechanism::kObjectivePerturbation ? "objective" : "output";
}

const char* BaseLearnerName(BaseLearner b) {
  return b == BaseLearner::kLogistic ? "logistic" : "ridge";
}

const char* AttackGoalName(AttackGoal g) {
  switch (g) {
    case AttackGoal::kParameterTargeting:
      return "parameter_targeting";
    case AttackGoal::kLabelTargeting:
      return "label_targeting";
    case AttackGoal::kLabelAversion:
      return "label_aversion";
  }
  return "unknown";
}

double LogisticLoss(double margin) {
  // log(1 + e^{-m}) = max(-m, 0) + log1p(e^{-|m|})
  return std::max(-margin, 0.0) + std::log1p(std::exp(-std::abs(margin)));
}

double SigmoidNeg(double margin) {
  if (margin >= 0) {
    const double e = std::exp(-margin);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(margin));
}

absl::Status ValidateCost(const CostSpec& cost, int dim) {
  if (cost.goal == AttackGoal::kParameterTargeting) {
    if (cost.target_model.size() == 0) {
      return absl::InvalidArgumentError(
          "parameter-targeting cost needs a target model");
    }
    if (cost.target_model.size() != dim) {
      return absl::InvalidArgumentError(
          absl::StrCat("target model has dimension ", cost.target_model.size(),
                       ", expected ", dim));
    }
    return absl::OkStatus();
  }
  if (cost.eval_set.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(AttackGoalName(cost.goal), " cost needs an evaluation set"));
  }
  if (cost.eval_set.dim != dim) {
    return absl::InvalidArgumentError(
        absl::StrCat("evaluation set has dimension ", cost.eval_set.dim,
                     ", expected ", dim));
  }
  for (const LabeledItem& item : cost.eval_set.items) {
    if (item.x.size() != dim) {
      return absl::InvalidArgumentError("ragged evaluation set");
    }
  }
  return absl::OkStatus();
}

double EvalCostUnchecked(const CostSpec& cost, const Vector& theta) {
  if (cost.goal == AttackGoal::kParameterTargeting) {
    return 0.5 * (theta - cost.target_model).squaredNorm();
  }
  double total = 0.0;
  for (const LabeledItem& item : cost.eval_set.items) {
    const double pred = item.x.dot(theta);
    if (cost.loss == EvalLoss::kLogistic) {
      total += LogisticLoss(item.y * pred);
    } else {
      const double r = pred - item.y;
      total += 0.5 * r * r;
    }
  }
  const double mean = total / cost.eval_set.size();
  return cost.goal == AttackGoal::kLabelAversion ? -mean : mean;
}

absl::StatusOr<double> EvalCost(const CostSpec& cost,
                                const ModelParams& model) {
  if (absl::Status s = ValidateCost(cost, static_cast<int>(model.theta.size()));
      !s.ok()) {
    return s;
  }
  return EvalCostUnchecked(cost, model.theta);
}

LabeledItem ProjectItem(const LabeledItem& item) {
  LabeledItem out = item;
  const double norm = item.x.norm();
  if (norm > 1.0) {
    out.x = item.x / norm;
    // Rounding can leave the norm one ulp above 1; shrink until it is not so
    // that projection is idempotent.
    while (out.x.norm() > 1.0) out.x *= std::nextafter(1.0, 0.0);
  }
  out.y = std::clamp(item.y, -1.0, 1.0);
  return out;
}

absl::StatusOr<double> ModificationDistance(const LabeledItem& poisoned,
                                            const LabeledItem& clean,
                                            BaseLearner base) {
  if (poisoned.x.size() != clean.x.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("item dimensions differ: ", poisoned.x.size(), " vs ",
                     clean.x.size()));
  }
  double r = 0.5 * (poisoned.x - clean.x).squaredNorm();
  if (base == BaseLearner::kRidge) {
    const double dy = poisoned.y - clean.y;
    r += 0.5 * dy * dy;
  }
  return r;
}

}  // namespace dppoison
