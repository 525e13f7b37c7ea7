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

#ifndef DPPOISON_EXPERIMENT_H_
#define DPPOISON_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dppoison/attacks.h"
#include "dppoison/datasets.h"
#include "dppoison/estimate.h"
#include "dppoison/types.h"
#include "json.hpp"

namespace dppoison {

enum class DataSourceKind { kGen1d, kGen2d, kCsv };
enum class EvalSourceKind {
  kNone,
  kGrid1d,
  kGrid2d,
  kNeighbors,
  kMinLabel,
  kCsv
};
enum class SweepKind { kNone, kBudget, kEpsilon };

struct DataSource {
  DataSourceKind kind = DataSourceKind::kGen2d;
  int n = 317;
  Vector theta_star = Vector::Ones(2);
  std::string path;
  CsvSchema schema;
  bool normalize = false;
  bool normalize_labels = false;
  double label_lo = 0.0;
  double label_hi = 10.0;
};

struct EvalSource {
  EvalSourceKind kind = EvalSourceKind::kNone;
  int m = 0;                  // Grid size.
  double label = 1.0;         // Neighbors: class the seed item is drawn from.
  int count = 10;             // Neighbors: number of neighbors.
  bool include_seed = false;  // Neighbors: also evaluate on the seed item.
  double target_label = 1.0;  // MinLabel: label assigned to the chosen item.
  std::string path;           // Csv.
  CsvSchema schema;
  bool normalize = false;
};

struct CostConfig {
  AttackGoal goal = AttackGoal::kParameterTargeting;
  EvalLoss loss = EvalLoss::kLogistic;
  // Parameter targeting: an explicit target, or (when empty) the base learner
  // trained on the evaluation set.
  Vector target;
  std::optional<double> cbar;
};

struct SweepConfig {
  SweepKind kind = SweepKind::kNone;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  VictimSpec victim;
  DataSource data;
  EvalSource eval;
  CostConfig cost;
  // k < 0 means "all n items".
  AttackConfig attack;
  SweepConfig sweep;
  std::string out_dir;
  // Every trace_stride-th iteration (plus the last) goes to trace.csv.
  int trace_stride = 1;
  // Single runs estimate J every eval_every iterations; 0 keeps only the
  // first and last iteration.
  int eval_every = 0;
};

// Parses a JSON config. Relative CSV paths resolve against `base_dir`.
// Missing keys take their defaults.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const nlohmann::ordered_json& j, const std::string& base_dir = "");
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path);

// The fully resolved config; parsing it back yields the same experiment.
nlohmann::ordered_json ExperimentConfigToJson(const ExperimentConfig& config);

absl::Status ValidateExperimentConfig(const ExperimentConfig& config);

// Materialized inputs of an experiment.
struct ExperimentInputs {
  Dataset data;
  Dataset eval_set;
  CostSpec cost;
  // Dataset index of the neighbor-set seed item, or -1.
  int eval_seed_index = -1;
};

absl::StatusOr<ExperimentInputs> BuildInputs(const ExperimentConfig& config);

struct CurveRow {
  double x = 0.0;
  CostEstimate estimate;
  double lower_bound = 0.0;
};

struct SweepPoint {
  int k = 0;
  double epsilon = 0.0;
  std::vector<int> selected;
  CostEstimate clean;
  CostEstimate poisoned;
  // J(D) entering the bound: clean.mean - 2 * clean.std_error, clipped to the
  // cost's sign domain.
  double bound_j_clean = 0.0;
  double lower_bound = 0.0;
  bool sound = false;
  Vector surrogate_model;
  double surrogate_cost = 0.0;
  Dataset poisoned_data;
};

struct ExperimentResult {
  absl::Status status;
  std::vector<SweepPoint> points;
  std::vector<CurveRow> curve;
  // Single runs only.
  std::optional<AttackTrace> trace;
  double runtime_seconds = 0.0;

  bool AllSound() const;
};

// Runs selection, attack and evaluation for every sweep point (or once), and
// writes trace.csv, curve.csv, poisoned*.csv and summary.json into
// config.out_dir when it is set. Failures are recorded in the result and the
// summary; whatever completed is still written.
ExperimentResult RunExperiment(const ExperimentConfig& config);

// J estimate of `data` under the config's victim and cost.
absl::StatusOr<CostEstimate> EvaluateDataset(const ExperimentConfig& config,
                                             const ExperimentInputs& inputs,
                                             const Dataset& data);

// Lower bound for the given clean estimate, budget and victim.
absl::StatusOr<double> BoundForEstimate(const VictimSpec& victim,
                                        const CostSpec& cost,
                                        const CostEstimate& clean, int k,
                                        double* j_used = nullptr);

}  // namespace dppoison

#endif  // DPPOISON_EXPERIMENT_H_
