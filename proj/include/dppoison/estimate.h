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

#ifndef DPPOISON_ESTIMATE_H_
#define DPPOISON_ESTIMATE_H_

#include <cstdint>
#include <functional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dppoison/learners.h"
#include "dppoison/types.h"

namespace dppoison {

struct CostEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

// Runs body(i) for i in [0, count) on up to `threads` workers. Returns the
// error of the lowest failing index, so the outcome does not depend on
// scheduling.
absl::Status ParallelFor(int count, int threads,
                         const std::function<absl::Status(int)>& body);

// Monte-Carlo estimate of J(data) = E_b[C(M(data, b))] from `samples` noise
// draws. Sample s draws its noise from a stream derived from (seed, s), so the
// result is independent of `threads`.
absl::StatusOr<CostEstimate> EstimateAttackCost(
    const VictimSpec& victim, const Dataset& data, const CostSpec& cost,
    int samples, std::uint64_t seed, int threads = 1,
    const SolverSettings& solver = {});

// Mean and standard error of a sample vector (at least two values).
CostEstimate Summarize(const std::vector<double>& values);

}  // namespace dppoison

#endif  // DPPOISON_ESTIMATE_H_
