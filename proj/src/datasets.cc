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

#include "dppoison/datasets.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"

namespace dppoison {
namespace {

std::vector<std::string> SplitLine(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  if (delimiter == ' ') {
    fields = absl::StrSplit(line, absl::ByAnyChar(" \t"), absl::SkipEmpty());
  } else {
    fields = absl::StrSplit(line, delimiter);
  }
  for (std::string& f : fields) {
    f = std::string(absl::StripAsciiWhitespace(f));
    if (f.size() >= 2 && f.front() == '"' && f.back() == '"') {
      f = f.substr(1, f.size() - 2);
    }
  }
  return fields;
}

bool ParseNumber(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

absl::StatusOr<int> ResolveColumn(const std::string& ref,
                                  const std::vector<std::string>& header,
                                  int columns) {
  if (!header.empty()) {
    auto it = std::find(header.begin(), header.end(), ref);
    if (it != header.end()) return static_cast<int>(it - header.begin());
  }
  int index = -1;
  auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), index);
  if (ec == std::errc() && ptr == ref.data() + ref.size() && index >= 0 &&
      index < columns) {
    return index;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown column '", ref, "'"));
}

}  // namespace

Dataset Gen1dDataset(int n, RandomStream& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Dataset data{1, {}};
  data.items.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector x(1);
    x[0] = uniform(rng);
    data.items.push_back({x, x[0] >= 0 ? 1.0 : -1.0});
  }
  return data;
}

Dataset Gen2dDataset(int n, const Vector& theta_star, RandomStream& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Dataset data{2, {}};
  data.items.reserve(n);
  while (data.size() < n) {
    Vector x(2);
    x << uniform(rng), uniform(rng);
    if (x.squaredNorm() > 1.0) continue;
    data.items.push_back({x, x.dot(theta_star) >= 0 ? 1.0 : -1.0});
  }
  return data;
}

absl::StatusOr<Dataset> EvalGrid1d(int m) {
  if (m < 2) return absl::InvalidArgumentError("1D grid needs m >= 2");
  Dataset data{1, {}};
  for (int i = 0; i < m; ++i) {
    Vector x(1);
    x[0] = static_cast<double>(2 * i - (m - 1)) / (m - 1);
    data.items.push_back({x, x[0] >= 0 ? 1.0 : -1.0});
  }
  return data;
}

absl::StatusOr<Dataset> EvalGrid2d(int m) {
  if (m < 1) return absl::InvalidArgumentError("2D grid needs m >= 1");
  auto lattice_count = [](int r) {
    int count = 0;
    for (int i = -r; i <= r; ++i) {
      for (int j = -r; j <= r; ++j) count += (i * i + j * j <= r * r);
    }
    return count;
  };
  int radius = 0;
  while (lattice_count(radius) < m) ++radius;
  if (lattice_count(radius) != m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "m = ", m, " is not a lattice-point count of a disk (nearest: ",
        lattice_count(radius), " at spacing 1/", radius, ")"));
  }
  Dataset data{2, {}};
  if (radius == 0) {
    data.items.push_back({Vector::Zero(2), 1.0});
    return data;
  }
  for (int i = -radius; i <= radius; ++i) {
    for (int j = -radius; j <= radius; ++j) {
      if (i * i + j * j > radius * radius) continue;
      Vector x(2);
      x << static_cast<double>(i) / radius, static_cast<double>(j) / radius;
      data.items.push_back({x, i >= 0 ? 1.0 : -1.0});
    }
  }
  return data;
}

CsvSchema NativeCsvSchema() {
  CsvSchema schema;
  schema.label_column = "y";
  return schema;
}

absl::StatusOr<Dataset> ParseCsvDataset(std::istream& in,
                                        const CsvSchema& schema) {
  std::string line;
  int line_number = 0;
  std::vector<std::string> header;
  int columns = -1;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!absl::StripAsciiWhitespace(line).empty()) return true;
    }
    return false;
  };

  if (schema.has_header) {
    if (!next_line()) return absl::InvalidArgumentError("empty CSV input");
    header = SplitLine(line, schema.delimiter);
    columns = static_cast<int>(header.size());
  }

  int label_col = -1;
  std::vector<int> feature_cols;
  Dataset data;
  while (next_line()) {
    const std::vector<std::string> fields = SplitLine(line, schema.delimiter);
    if (columns < 0) columns = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != columns) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": expected ", columns,
                       " fields, found ", fields.size()));
    }
    if (label_col < 0) {
      if (schema.label_column.empty()) {
        label_col = columns - 1;
      } else {
        absl::StatusOr<int> col = ResolveColumn(schema.label_column, header, columns);
        if (!col.ok()) return col.status();
        label_col = *col;
      }
      if (schema.feature_columns.empty()) {
        for (int c = 0; c < columns; ++c) {
          if (c != label_col) feature_cols.push_back(c);
        }
      } else {
        for (const std::string& ref : schema.feature_columns) {
          absl::StatusOr<int> col = ResolveColumn(ref, header, columns);
          if (!col.ok()) return col.status();
          feature_cols.push_back(*col);
        }
      }
      if (feature_cols.empty()) {
        return absl::InvalidArgumentError("no feature columns");
      }
      data.dim = static_cast<int>(feature_cols.size());
    }

    LabeledItem item{Vector(data.dim), 0.0};
    for (int c = 0; c < data.dim; ++c) {
      const std::string& text = fields[feature_cols[c]];
      if (!ParseNumber(text, item.x[c])) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_number, ": cannot parse feature '", text, "'"));
      }
    }
    const std::string& label_text = fields[label_col];
    if (!schema.label_map.empty()) {
      auto it = schema.label_map.find(label_text);
      if (it == schema.label_map.end()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_number, ": unknown label '", label_text, "'"));
      }
      item.y = it->second;
    } else if (!ParseNumber(label_text, item.y)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": cannot parse label '", label_text, "'"));
    }
    data.items.push_back(std::move(item));
  }
  if (data.empty()) return absl::InvalidArgumentError("CSV input has no rows");
  return data;
}

absl::StatusOr<Dataset> LoadCsvDataset(const std::string& path,
                                        const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  absl::StatusOr<Dataset> data = ParseCsvDataset(in, schema);
  if (!data.ok()) {
    return absl::Status(data.status().code(),
                        absl::StrCat(path, ": ", data.status().message()));
  }
  return data;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

absl::Status WriteDatasetCsv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  for (int c = 0; c < data.dim; ++c) out << 'x' << c << ',';
  out << "y\n";
  for (const LabeledItem& item : data.items) {
    for (int c = 0; c < data.dim; ++c) out << FormatDouble(item.x[c]) << ',';
    out << FormatDouble(item.y) << '\n';
  }
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<Dataset> NormalizeDataset(const Dataset& data,
                                         bool normalize_labels,
                                         double label_lo, double label_hi) {
  if (data.empty()) return absl::InvalidArgumentError("empty dataset");
  double max_norm = 0.0;
  for (const LabeledItem& item : data.items) {
    max_norm = std::max(max_norm, item.x.norm());
  }
  if (max_norm == 0.0) {
    return absl::InvalidArgumentError("all feature vectors are zero");
  }
  if (normalize_labels && !(label_hi > label_lo)) {
    return absl::InvalidArgumentError("label range must be non-empty");
  }
  Dataset out = data;
  for (LabeledItem& item : out.items) {
    item.x /= max_norm;
    if (normalize_labels) {
      item.y = 2.0 * (item.y - label_lo) / (label_hi - label_lo) - 1.0;
    }
  }
  return out;
}

absl::StatusOr<NeighborEvalSet> BuildNeighborEvalSet(const Dataset& data,
                                                     double label, int count,
                                                     bool include_seed,
                                                     RandomStream& rng) {
  if (count < 0) return absl::InvalidArgumentError("count must be >= 0");
  std::vector<int> members;
  for (int i = 0; i < data.size(); ++i) {
    if (data.items[i].y == label) members.push_back(i);
  }
  if (static_cast<int>(members.size()) < count + 1) {
    return absl::FailedPreconditionError(
        absl::StrCat("class ", label, " has ", members.size(),
                     " items; need at least ", count + 1));
  }
  NeighborEvalSet out;
  out.eval_set.dim = data.dim;
  std::uniform_int_distribution<int> pick(0, static_cast<int>(members.size()) - 1);
  out.seed_index = members[pick(rng)];
  const Vector& center = data.items[out.seed_index].x;

  std::vector<int> others;
  for (int i : members) {
    if (i != out.seed_index) others.push_back(i);
  }
  std::vector<double> dist(data.size(), 0.0);
  for (int i : others) dist[i] = (data.items[i].x - center).squaredNorm();
  std::stable_sort(others.begin(), others.end(),
                   [&](int a, int b) { return dist[a] < dist[b]; });
  if (include_seed) out.members.push_back(out.seed_index);
  out.members.insert(out.members.end(), others.begin(), others.begin() + count);
  for (int i : out.members) {
    out.eval_set.items.push_back({data.items[i].x, -label});
  }
  return out;
}

absl::StatusOr<Dataset> MinLabelEvalSet(const Dataset& data,
                                        double target_label) {
  if (data.empty()) return absl::InvalidArgumentError("empty dataset");
  int best = 0;
  for (int i = 1; i < data.size(); ++i) {
    if (data.items[i].y < data.items[best].y) best = i;
  }
  Dataset out{data.dim, {{data.items[best].x, target_label}}};
  return out;
}

}  // namespace dppoison
