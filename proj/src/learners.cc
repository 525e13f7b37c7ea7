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

#include "dppoison/learners.h"

#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "dppoison/core.h"
#include "dppoison/design_matrix.h"
#include "dppoison/kernels.h"

namespace dppoison {
namespace {

// Newton decrement below which full steps are taken without a line search;
// past this point objective differences sit at rounding level.
constexpr double kFullStepDecrement = 1e-8;
constexpr double kArmijo = 1e-4;

absl::Status CheckData(const Dataset& data, int noise_dim) {
  if (data.dim <= 0) return absl::InvalidArgumentError("dataset has no dim");
  if (noise_dim != data.dim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "noise dimension ", noise_dim, " does not match data dimension ",
        data.dim));
  }
  for (const LabeledItem& item : data.items) {
    if (item.x.size() != data.dim) {
      return absl::InvalidArgumentError("ragged dataset");
    }
  }
  return absl::OkStatus();
}

class LogisticObjective {
 public:
  LogisticObjective(const Dataset& data, double lambda, const Vector& b)
      : x_(data), lambda_(lambda), b_(b), margins_(data.size()),
        weights_(data.size()), curvature_(data.size()) {}

  double Value(const Vector& theta) {
    x_.Margins(theta, margins_);
    const auto y = x_.labels();
    double loss = 0.0;
    for (int j = 0; j < x_.rows(); ++j) loss += LogisticLoss(y[j] * margins_[j]);
    return loss + 0.5 * lambda_ * theta.squaredNorm() + b_.dot(theta);
  }

  // Gradient at theta; also caches the Hessian weights for Hessian().
  Vector Gradient(const Vector& theta) {
    x_.Margins(theta, margins_);
    const auto y = x_.labels();
    for (int j = 0; j < x_.rows(); ++j) {
      const double m = y[j] * margins_[j];
      const double neg = SigmoidNeg(m);
      weights_[j] = y[j] * neg;
      curvature_[j] = neg * SigmoidNeg(-m);
    }
    return lambda_ * theta - x_.WeightedSum(weights_) + b_;
  }

  Matrix Hessian() const { return x_.WeightedGram(curvature_, lambda_); }

  double CurvatureBound() const {
    double total = lambda_;
    for (int c = 0; c < x_.cols(); ++c) {
      total += 0.25 * kernels::Dot(x_.column(c), x_.column(c));
    }
    return total;
  }

 private:
  DesignMatrix x_;
  double lambda_;
  const Vector& b_;
  std::vector<double> margins_;
  std::vector<double> weights_;
  std::vector<double> curvature_;
};

absl::StatusOr<ModelParams> SolveLogistic(const Dataset& data, double lambda,
                                          const Vector& b,
                                          const SolverSettings& settings,
                                          const Vector* warm_start) {
  if (!(lambda > 0)) return absl::InvalidArgumentError("lambda must be > 0");
  if (absl::Status s = CheckData(data, static_cast<int>(b.size())); !s.ok()) {
    return s;
  }
  LogisticObjective objective(data, lambda, b);
  Vector theta = (warm_start != nullptr && warm_start->size() == data.dim)
                     ? *warm_start
                     : Vector::Zero(data.dim);
  double grad_norm = 0.0;
  for (int iter = 0; iter < settings.max_iters; ++iter) {
    const Vector grad = objective.Gradient(theta);
    grad_norm = grad.norm();
    if (!std::isfinite(grad_norm)) {
      return absl::InternalError("logistic solver diverged");
    }
    if (grad_norm <= settings.grad_tol) return ModelParams{theta, 0.0};

    Vector direction;
    const Eigen::LLT<Matrix> llt(objective.Hessian());
    if (llt.info() == Eigen::Success) {
      direction = -llt.solve(grad);
    } else {
      direction = -grad / objective.CurvatureBound();
    }
    const double decrement = -grad.dot(direction);
    if (decrement < kFullStepDecrement) {
      theta += direction;
      continue;
    }
    const double f0 = objective.Value(theta);
    double step = 1.0;
    while (step > 1e-12 &&
           objective.Value(theta + step * direction) >
               f0 - kArmijo * step * decrement) {
      step *= 0.5;
    }
    theta += step * direction;
  }
  return absl::InternalError(
      absl::StrCat("logistic solver did not converge in ", settings.max_iters,
                   " iterations (gradient norm ", grad_norm, ")"));
}

}  // namespace

absl::Status ValidateVictim(const VictimSpec& victim) {
  if (!(victim.lambda > 0)) return absl::InvalidArgumentError("lambda must be > 0");
  if (!(victim.epsilon > 0)) {
    return absl::InvalidArgumentError("epsilon must be > 0");
  }
  if (!(victim.delta >= 0 && victim.delta < 1)) {
    return absl::InvalidArgumentError("delta must lie in [0, 1)");
  }
  if (victim.base == BaseLearner::kRidge &&
      !(victim.rho.has_value() && *victim.rho > 0)) {
    return absl::InvalidArgumentError("ridge victims need a radius rho > 0");
  }
  if (victim.noise_scale.has_value() && !(*victim.noise_scale > 0)) {
    return absl::InvalidArgumentError("noise_scale must be > 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<ModelParams> TrainBaseLogistic(const Dataset& data,
                                              double lambda,
                                              const SolverSettings& settings,
                                              const Vector* warm_start) {
  return SolveLogistic(data, lambda, Vector::Zero(data.dim), settings,
                       warm_start);
}

absl::StatusOr<ModelParams> TrainObjectivePerturbedLogistic(
    const Dataset& data, double lambda, const NoiseSample& noise,
    const SolverSettings& settings, const Vector* warm_start) {
  return SolveLogistic(data, lambda, noise.b, settings, warm_start);
}

absl::StatusOr<ModelParams> TrainConstrainedRidge(
    const Dataset& data, double lambda, double rho, const NoiseSample& noise,
    const SolverSettings& settings) {
  if (!(lambda > 0)) return absl::InvalidArgumentError("lambda must be > 0");
  if (!(rho > 0)) return absl::InvalidArgumentError("rho must be > 0");
  if (absl::Status s = CheckData(data, noise.dim()); !s.ok()) return s;

  const DesignMatrix x(data);
  const Matrix gram = x.Gram(lambda);
  const Vector rhs = x.WeightedSum(x.labels()) - noise.b;
  Vector theta = gram.llt().solve(rhs);
  if (theta.norm() <= rho) return ModelParams{theta, 0.0};

  // ||theta(mu)||^2 = sum_i c_i^2 / (l_i + mu)^2 in the eigenbasis of the
  // Gram matrix, strictly decreasing in mu.
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Vector coeffs = eig.eigenvectors().transpose() * rhs;
  const Vector& evals = eig.eigenvalues();
  auto norm_at = [&](double mu) {
    return (coeffs.array() / (evals.array() + mu)).matrix().norm();
  };
  double lo = 0.0;
  double hi = 1.0;
  while (norm_at(hi) > rho) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > settings.dual_tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (norm_at(mid) > rho) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double mu = hi;
  theta = eig.eigenvectors() *
          (coeffs.array() / (evals.array() + mu)).matrix();
  return ModelParams{theta, mu};
}

absl::StatusOr<ModelParams> TrainMechanism(const VictimSpec& victim,
                                           const Dataset& data,
                                           const NoiseSample& noise,
                                           const SolverSettings& settings,
                                           const Vector* warm_start) {
  if (absl::Status s = ValidateVictim(victim); !s.ok()) return s;
  if (noise.dim() != data.dim) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise dimension ", noise.dim(),
                     " does not match data dimension ", data.dim));
  }
  if (victim.mechanism == Mechanism::kObjectivePerturbation) {
    if (victim.base == BaseLearner::kLogistic) {
      return TrainObjectivePerturbedLogistic(data, victim.lambda, noise,
                                             settings, warm_start);
    }
    return TrainConstrainedRidge(data, victim.lambda, *victim.rho, noise,
                                 settings);
  }
  absl::StatusOr<ModelParams> base =
      TrainBaseLearner(victim, data, settings, warm_start);
  if (!base.ok()) return base.status();
  base->theta += noise.b;
  return base;
}

absl::StatusOr<ModelParams> TrainBaseLearner(const VictimSpec& victim,
                                             const Dataset& data,
                                             const SolverSettings& settings,
                                             const Vector* warm_start) {
  if (absl::Status s = ValidateVictim(victim); !s.ok()) return s;
  if (victim.base == BaseLearner::kLogistic) {
    return TrainBaseLogistic(data, victim.lambda, settings, warm_start);
  }
  return TrainConstrainedRidge(data, victim.lambda, *victim.rho,
                               NoiseSample::Zero(data.dim), settings);
}

}  // namespace dppoison
