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

#include "dppoison/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace dppoison {
namespace {

// Past this exponent e^{k eps} overflows; the bounds take their limit values.
constexpr double kMaxExponent = 700.0;
// Slack applied before ceil() so that values like 10.000000000000002 that are
// integers up to rounding do not round up.
constexpr double kCeilSlack = 1e-9;

int CeilWithSlack(double x) {
  return static_cast<int>(std::ceil(x - kCeilSlack * std::max(1.0, std::abs(x))));
}

// cbar delta / (e^eps - 1)
double DeltaShift(const BoundQuery& q) {
  return q.cbar.value_or(0.0) * q.delta / std::expm1(q.epsilon);
}

}  // namespace

absl::Status ValidateBoundQuery(const BoundQuery& q) {
  if (!(q.epsilon > 0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (!(q.delta >= 0 && q.delta < 1)) {
    return absl::InvalidArgumentError("delta must lie in [0, 1)");
  }
  if (q.k < 0) return absl::InvalidArgumentError("k must be >= 0");
  if (q.cbar.has_value() && !(*q.cbar > 0)) {
    return absl::InvalidArgumentError("cbar must be > 0");
  }
  if (q.delta > 0 && !q.cbar.has_value()) {
    return absl::InvalidArgumentError("delta > 0 requires a cost bound cbar");
  }
  if (q.sign == CostSign::kNonNegative && q.j_clean < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("non-negative cost with J(D) = ", q.j_clean));
  }
  if (q.sign == CostSign::kNonPositive && q.j_clean > 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("non-positive cost with J(D) = ", q.j_clean));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> LowerBoundPure(const BoundQuery& q) {
  if (absl::Status s = ValidateBoundQuery(q); !s.ok()) return s;
  if (q.delta != 0) {
    return absl::InvalidArgumentError("pure bound needs delta = 0");
  }
  const double exponent = q.k * q.epsilon;
  if (q.sign == CostSign::kNonNegative) {
    if (exponent > kMaxExponent) return 0.0;
    return std::exp(-exponent) * q.j_clean;
  }
  if (q.j_clean == 0) return 0.0;
  if (exponent > kMaxExponent) return -std::numeric_limits<double>::infinity();
  return std::exp(exponent) * q.j_clean;
}

absl::StatusOr<int> MinItemsPure(double epsilon, double tau) {
  if (!(epsilon > 0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (!(tau >= 1)) return absl::InvalidArgumentError("tau must be >= 1");
  if (std::isinf(tau)) {
    return absl::InvalidArgumentError(
        "no finite k reaches tau = infinity under pure differential privacy");
  }
  return CeilWithSlack(std::log(tau) / epsilon);
}

absl::StatusOr<double> LowerBoundApprox(const BoundQuery& q) {
  if (absl::Status s = ValidateBoundQuery(q); !s.ok()) return s;
  if (q.delta == 0) return LowerBoundPure(q);
  if (!q.cbar.has_value()) {
    return absl::InvalidArgumentError("approximate bound needs cbar");
  }
  const double shift = DeltaShift(q);
  const double exponent = q.k * q.epsilon;
  if (q.sign == CostSign::kNonNegative) {
    if (exponent > kMaxExponent) return 0.0;
    return std::max(std::exp(-exponent) * (q.j_clean + shift) - shift, 0.0);
  }
  if (exponent > kMaxExponent) return -*q.cbar;
  return std::max(std::exp(exponent) * (q.j_clean - shift) + shift, -*q.cbar);
}

absl::StatusOr<int> MinItemsApprox(const BoundQuery& q) {
  if (absl::Status s = ValidateBoundQuery(q); !s.ok()) return s;
  if (q.j_clean == 0) {
    return absl::InvalidArgumentError("min-items bounds assume J(D) != 0");
  }
  if (!(q.tau >= 1)) return absl::InvalidArgumentError("tau must be >= 1");
  if (q.delta == 0) return MinItemsPure(q.epsilon, q.tau);

  const double growth = std::expm1(q.epsilon);
  const double slack = *q.cbar * q.delta;
  double ratio = 0.0;
  if (q.sign == CostSign::kNonNegative) {
    if (std::isinf(q.tau)) {
      ratio = (growth * q.j_clean + slack) / slack;
    } else {
      ratio = (growth * q.j_clean * q.tau + slack * q.tau) /
              (growth * q.j_clean + slack * q.tau);
    }
  } else {
    const double tau_max = -*q.cbar / q.j_clean;
    if (q.tau > tau_max) {
      return absl::InvalidArgumentError(absl::StrCat(
          "tau must lie in [1, -cbar/J(D)] = [1, ", tau_max, "]"));
    }
    ratio = (growth * q.j_clean * q.tau - slack) /
            (growth * q.j_clean - slack);
  }
  return std::max(0, CeilWithSlack(std::log(ratio) / q.epsilon));
}

absl::StatusOr<double> LowerBound(const BoundQuery& q) {
  return q.delta == 0 ? LowerBoundPure(q) : LowerBoundApprox(q);
}

}  // namespace dppoison
