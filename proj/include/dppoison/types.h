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

#ifndef DPPOISON_TYPES_H_
#define DPPOISON_TYPES_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace dppoison {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A training or evaluation item z = (x, y). Classification labels are +1/-1;
// regression labels live in [-1, 1].
struct LabeledItem {
  Vector x;
  double y = 0.0;
};

// Ordered collection of items sharing one feature dimension. Items are
// referred to by index everywhere (selection, poisoning, traces), so the
// order is part of the value.
struct Dataset {
  int dim = 0;
  std::vector<LabeledItem> items;

  int size() const { return static_cast<int>(items.size()); }
  bool empty() const { return items.empty(); }
};

// Model parameters plus the dual variable of the norm constraint. `mu` is
// zero whenever no constraint applies or the constraint is inactive.
struct ModelParams {
  Vector theta;
  double mu = 0.0;
};

enum class Mechanism { kObjectivePerturbation, kOutputPerturbation };
enum class BaseLearner { kLogistic, kRidge };

// A differentially-private victim learner. `noise_scale` is the radial scale
// of the noise norm; when unset the mechanism's default calibration applies
// (see ResolveNoiseScale in learners.h).
struct VictimSpec {
  Mechanism mechanism = Mechanism::kObjectivePerturbation;
  BaseLearner base = BaseLearner::kLogistic;
  double lambda = 10.0;
  std::optional<double> rho;
  double epsilon = 0.1;
  double delta = 0.0;
  std::optional<double> noise_scale;
};

enum class AttackGoal { kParameterTargeting, kLabelTargeting, kLabelAversion };
enum class CostSign { kNonNegative, kNonPositive };
// Per-item loss used by the label goals: logistic loss for classification
// evaluation sets, half squared error for regression ones.
enum class EvalLoss { kLogistic, kSquared };

struct CostSpec {
  AttackGoal goal = AttackGoal::kParameterTargeting;
  EvalLoss loss = EvalLoss::kLogistic;
  Vector target_model;  // ParameterTargeting only.
  Dataset eval_set;     // Label goals only.
  std::optional<double> cbar;

  CostSign sign() const {
    return goal == AttackGoal::kLabelAversion ? CostSign::kNonPositive
                                              : CostSign::kNonNegative;
  }
};

// Helpers for building cost specs.
CostSpec ParameterTargetingCost(Vector target);
CostSpec LabelTargetingCost(Dataset eval_set, EvalLoss loss);
CostSpec LabelAversionCost(Dataset eval_set, EvalLoss loss);

const char* MechanismName(Mechanism m);
const char* BaseLearnerName(BaseLearner b);
const char* AttackGoalName(AttackGoal g);

}  // namespace dppoison

#endif  // DPPOISON_TYPES_H_
