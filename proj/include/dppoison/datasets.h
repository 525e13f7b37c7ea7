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

#ifndef DPPOISON_DATASETS_H_
#define DPPOISON_DATASETS_H_

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dppoison/rng.h"
#include "dppoison/types.h"

namespace dppoison {

// n points uniform on [-1, 1]; label +1 iff x >= 0, else -1.
Dataset Gen1dDataset(int n, RandomStream& rng);

// n points uniform in the unit disk; label +1 iff x . theta_star >= 0.
Dataset Gen2dDataset(int n, const Vector& theta_star, RandomStream& rng);

// m evenly spaced points on [-1, 1] (m = 21 gives -1.0, -0.9, ..., 1.0) with
// indicator labels.
absl::StatusOr<Dataset> EvalGrid1d(int m);

// The integer lattice scaled by 1/R, restricted to the closed unit disk,
// labeled +1 iff the first coordinate is >= 0. R is the radius whose lattice
// count equals m (R = 10 gives m = 317); other m are rejected.
absl::StatusOr<Dataset> EvalGrid2d(int m);

// Column layout of a delimited text file.
struct CsvSchema {
  // ',' or ';' etc. A space means "any run of whitespace".
  char delimiter = ',';
  bool has_header = true;
  // Column names (with a header) or zero-based indices. Empty selects every
  // column except the label.
  std::vector<std::string> feature_columns;
  // Defaults to the last column.
  std::string label_column;
  // Raw label text -> numeric label. Empty parses labels as numbers.
  std::map<std::string, double> label_map;
};

// The schema of files written by WriteDatasetCsv: header x0..x{d-1},y.
CsvSchema NativeCsvSchema();

absl::StatusOr<Dataset> ParseCsvDataset(std::istream& in,
                                        const CsvSchema& schema);
absl::StatusOr<Dataset> LoadCsvDataset(const std::string& path,
                                        const CsvSchema& schema);

// Header x0..x{d-1},y; values at 17 significant digits.
absl::Status WriteDatasetCsv(const Dataset& data, const std::string& path);
std::string FormatDouble(double v);

// Divides every feature vector by the largest item norm so the largest item
// lands on the unit sphere. When `normalize_labels` is set, labels in
// [label_lo, label_hi] are mapped affinely onto [-1, 1].
absl::StatusOr<Dataset> NormalizeDataset(const Dataset& data,
                                         bool normalize_labels,
                                         double label_lo = 0.0,
                                         double label_hi = 10.0);

struct NeighborEvalSet {
  Dataset eval_set;
  int seed_index = -1;
  // Dataset indices of the evaluation items, nearest first.
  std::vector<int> members;
};

// Picks a random item with label `label`, takes its `count` nearest (L2)
// neighbors within that class (the seed itself too when `include_seed`), and
// flips all of their labels to -label.
absl::StatusOr<NeighborEvalSet> BuildNeighborEvalSet(const Dataset& data,
                                                     double label, int count,
                                                     bool include_seed,
                                                     RandomStream& rng);

// The single item with the smallest label (first on ties), relabeled to
// `target_label`.
absl::StatusOr<Dataset> MinLabelEvalSet(const Dataset& data,
                                        double target_label);

}  // namespace dppoison

#endif  // DPPOISON_DATASETS_H_
