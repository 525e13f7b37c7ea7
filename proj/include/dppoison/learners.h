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

#ifndef DPPOISON_LEARNERS_H_
#define DPPOISON_LEARNERS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dppoison/noise.h"
#include "dppoison/types.h"

namespace dppoison {

struct SolverSettings {
  // Stop the logistic Newton iteration once the objective gradient norm is at
  // or below this value.
  double grad_tol = 1e-10;
  int max_iters = 10000;
  // Relative width at which the ridge dual bisection stops.
  double dual_tol = 1e-12;
};

absl::Status ValidateVictim(const VictimSpec& victim);

// argmin_theta sum_j log(1 + exp(-y_j theta.x_j)) + lambda/2 ||theta||^2.
// `warm_start`, when given, is the initial Newton iterate.
absl::StatusOr<ModelParams> TrainBaseLogistic(
    const Dataset& data, double lambda, const SolverSettings& settings = {},
    const Vector* warm_start = nullptr);

// Same objective plus the linear noise term b.theta. The returned model
// satisfies lambda theta - sum_j y_j x_j / (1 + exp(y_j theta.x_j)) + b = 0 to
// within settings.grad_tol.
absl::StatusOr<ModelParams> TrainObjectivePerturbedLogistic(
    const Dataset& data, double lambda, const NoiseSample& noise,
    const SolverSettings& settings = {}, const Vector* warm_start = nullptr);

// argmin_{||theta|| <= rho} 0.5 ||X theta - y||^2 + lambda/2 ||theta||^2
//                           + b.theta
// Returns theta together with the dual mu of the norm constraint, so that
// (X^T X + (lambda + mu) I) theta = X^T y - b with mu >= 0 and
// mu (||theta||^2 - rho^2) = 0. mu is exactly zero whenever the unconstrained
// minimizer is feasible.
absl::StatusOr<ModelParams> TrainConstrainedRidge(
    const Dataset& data, double lambda, double rho, const NoiseSample& noise,
    const SolverSettings& settings = {});

// Runs the private learner M(D, b). Objective perturbation solves the
// perturbed problem; output perturbation returns the base solution plus b
// (with the base solve's mu). `warm_start` is the initial iterate of the
// underlying logistic solve: the perturbed model for objective perturbation,
// the base model for output perturbation. Ridge ignores it.
absl::StatusOr<ModelParams> TrainMechanism(const VictimSpec& victim,
                                           const Dataset& data,
                                           const NoiseSample& noise,
                                           const SolverSettings& settings = {},
                                           const Vector* warm_start = nullptr);

// M(D, 0): the noiseless base learner of `victim`.
absl::StatusOr<ModelParams> TrainBaseLearner(
    const VictimSpec& victim, const Dataset& data,
    const SolverSettings& settings = {}, const Vector* warm_start = nullptr);

}  // namespace dppoison

#endif  // DPPOISON_LEARNERS_H_
