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

#ifndef DPPOISON_BOUNDS_H_
#define DPPOISON_BOUNDS_H_

#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dppoison/types.h"

// Lower bounds on the attack cost J(D~) that any attacker modifying at most k
// items can reach against an (epsilon, delta)-differentially-private learner,
// and the matching minimum number of modified items needed to cut the cost by
// a factor tau.

namespace dppoison {

struct BoundQuery {
  double j_clean = 0.0;  // J(D) on the clean data.
  double epsilon = 0.1;
  double delta = 0.0;
  int k = 0;
  std::optional<double> cbar;  // |C| <= cbar; required when delta > 0.
  CostSign sign = CostSign::kNonNegative;
  double tau = 1.0;  // Target reduction factor for the min-items queries.
};

absl::Status ValidateBoundQuery(const BoundQuery& q);

// delta = 0:  J(D~) >= e^{-k eps} J(D)   (C >= 0)
//             J(D~) >= e^{ k eps} J(D)   (C <= 0)
absl::StatusOr<double> LowerBoundPure(const BoundQuery& q);

// ceil(log(tau) / eps).
absl::StatusOr<int> MinItemsPure(double epsilon, double tau);

// With s = cbar delta / (e^eps - 1):
//   C >= 0:  max{ e^{-k eps} (J(D) + s) - s, 0 }
//   C <= 0:  max{ e^{ k eps} (J(D) - s) + s, -cbar }
// Equals LowerBoundPure exactly when delta = 0.
absl::StatusOr<double> LowerBoundApprox(const BoundQuery& q);

// Smallest k at which LowerBoundApprox stops ruling out J(D~) <= J(D)/tau
// (C >= 0) or J(D~) <= tau J(D) (C <= 0). tau may be +infinity for C >= 0.
absl::StatusOr<int> MinItemsApprox(const BoundQuery& q);

// Dispatches to the pure or approximate bound depending on q.delta.
absl::StatusOr<double> LowerBound(const BoundQuery& q);

}  // namespace dppoison

#endif  // DPPOISON_BOUNDS_H_
