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

#ifndef DPPOISON_ATTACKS_H_
#define DPPOISON_ATTACKS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dppoison/learners.h"
#include "dppoison/types.h"

namespace dppoison {

enum class Selection { kShallow, kDeep, kAll };

// kDpv attacks the private learner with one fresh noise draw per step;
// kSv attacks the noiseless base learner M(D~, 0) as a surrogate.
enum class AttackMode { kDpv, kSv };

const char* SelectionName(Selection s);
const char* AttackModeName(AttackMode m);

struct AttackConfig {
  int k = 0;
  Selection selection = Selection::kDeep;
  AttackMode mode = AttackMode::kDpv;
  double eta = 1.0;
  int iterations = 5000;
  // Noise draws averaged per item score by shallow selection against DPV.
  int m_select = 1000;
  // Weight of the modification penalty in the relaxed attack.
  double alpha = 1e-4;
  // Length of the relaxed attack run by deep selection; defaults to
  // `iterations`.
  std::optional<int> relaxed_iterations;
  // Noise draws averaged per SGD step in DPV mode.
  int batch = 1;
  // Monte-Carlo samples for J estimates made around the attack.
  int eval_samples = 1000;
  std::uint64_t seed = 0;
  SolverSettings solver;
};

absl::Status ValidateAttackConfig(const AttackConfig& config, int n);

struct AttackSnapshot {
  int iteration = 0;
  // Current values of the selected items, in AttackTrace::selected order.
  std::vector<LabeledItem> items;
  // C(M(D~, 0)) at this iteration.
  double surrogate_cost = 0.0;
};

struct AttackTrace {
  std::vector<int> selected;
  // iterations + 1 entries when the run completes (index 0 is the clean data).
  std::vector<AttackSnapshot> snapshots;
  Dataset poisoned;
  // Non-OK when a solver failed mid-run; the trace holds everything up to the
  // failing iteration.
  absl::Status status;
};

// Top-k items by the norm of their initial cost gradient. In DPV mode the
// gradient of J is estimated from m_select noise draws; in SV mode it is the
// exact gradient of C(M(D, 0)). Returns ascending indices; ties favor the
// lower index.
absl::StatusOr<std::vector<int>> SelectShallow(const VictimSpec& victim,
                                               const Dataset& data,
                                               const CostSpec& cost,
                                               const AttackConfig& config);

// Minimizes J(D~) + alpha R(D~) (DPV) or C(M(D~, 0)) + alpha R(D~) (SV) over
// all items for `iterations` steps, projecting every item after each step.
// The penalty enters through its proximal step
//   z~ <- (z~ - eta g + eta alpha z) / (1 + eta alpha),
// whose gradient is alpha (z~ - z) as in plain SGD but which stays stable
// for any eta * alpha.
absl::StatusOr<Dataset> RelaxedAttack(const VictimSpec& victim,
                                      const Dataset& data,
                                      const CostSpec& cost,
                                      const AttackConfig& config,
                                      int iterations);

// Runs the relaxed attack and returns the k items it moved the most
// (ascending indices; ties favor the lower index).
absl::StatusOr<std::vector<int>> SelectDeep(const VictimSpec& victim,
                                            const Dataset& data,
                                            const CostSpec& cost,
                                            const AttackConfig& config);

// The k items of `relaxed` farthest from their clean counterparts in `data`
// (ascending indices; ties favor the lower index).
absl::StatusOr<std::vector<int>> MostModified(const Dataset& relaxed,
                                              const Dataset& data,
                                              BaseLearner base, int k);

// Step I: pick config.k items per config.selection. Step II: run
// config.iterations SGD steps of size eta on the selected items only,
// projecting after each step. Unselected items never change.
absl::StatusOr<AttackTrace> RunAttack(const VictimSpec& victim,
                                      const Dataset& data, const CostSpec& cost,
                                      const AttackConfig& config);

// Step II only, with a caller-chosen item set.
AttackTrace RunAttackOnItems(const VictimSpec& victim, const Dataset& data,
                             const CostSpec& cost, const AttackConfig& config,
                             std::vector<int> selected);

}  // namespace dppoison

#endif  // DPPOISON_ATTACKS_H_
