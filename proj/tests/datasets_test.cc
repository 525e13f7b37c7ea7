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
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "test_util.h"

namespace dppoison {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(DPPOISON_TEST_DATA_DIR) + "/" + name;
}

CsvSchema VertebralSchema() {
  CsvSchema s;
  s.delimiter = ' ';
  s.has_header = false;
  s.label_map = {{"AB", 1.0}, {"NO", -1.0}};
  return s;
}

CsvSchema WineSchema() {
  CsvSchema s;
  s.delimiter = ';';
  s.label_column = "quality";
  return s;
}

TEST(CsvTest, ParsesWhitespaceSeparatedFileWithLabelMap) {
  absl::StatusOr<Dataset> data =
      LoadCsvDataset(DataPath("vertebral_sample.dat"), VertebralSchema());
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_EQ(data->dim, 6);
  ASSERT_EQ(data->size(), 7);
  EXPECT_DOUBLE_EQ(data->items[0].x[0], 63.03);
  EXPECT_DOUBLE_EQ(data->items[0].x[5], -0.25);
  EXPECT_EQ(data->items[0].y, 1.0);
  EXPECT_EQ(data->items[6].y, -1.0);
  EXPECT_DOUBLE_EQ(data->items[6].x[0], 53.43);
}

TEST(CsvTest, ParsesQuotedHeaderAndNamedLabel) {
  absl::StatusOr<Dataset> data =
      LoadCsvDataset(DataPath("wine_sample.csv"), WineSchema());
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_EQ(data->dim, 11);
  ASSERT_EQ(data->size(), 6);
  EXPECT_EQ(data->items[3].y, 6.0);
  EXPECT_DOUBLE_EQ(data->items[3].x[0], 11.2);
  EXPECT_DOUBLE_EQ(data->items[0].x[10], 9.4);
}

TEST(CsvTest, SelectsFeatureColumnsByNameOrIndex) {
  CsvSchema s = WineSchema();
  s.feature_columns = {"alcohol", "0"};
  absl::StatusOr<Dataset> data = LoadCsvDataset(DataPath("wine_sample.csv"), s);
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_EQ(data->dim, 2);
  EXPECT_DOUBLE_EQ(data->items[3].x[0], 9.8);
  EXPECT_DOUBLE_EQ(data->items[3].x[1], 11.2);
  s.feature_columns = {"no such column"};
  EXPECT_FALSE(LoadCsvDataset(DataPath("wine_sample.csv"), s).ok());
}

TEST(CsvTest, ErrorsCarryLineNumbers) {
  std::istringstream bad_field("x0,y\n1,1\n2,oops\n");
  absl::StatusOr<Dataset> r = ParseCsvDataset(bad_field, NativeCsvSchema());
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.status().message().find("line 3"), std::string::npos);

  std::istringstream ragged("x0,x1,y\n1,2,1\n\n1,1\n");
  r = ParseCsvDataset(ragged, NativeCsvSchema());
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.status().message().find("line 4"), std::string::npos);

  std::istringstream unknown("1 2 AB\n3 4 XX\n");
  r = ParseCsvDataset(unknown, VertebralSchema());
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.status().message().find("line 2"), std::string::npos);
  EXPECT_NE(r.status().message().find("XX"), std::string::npos);
}

TEST(CsvTest, RejectsEmptyInputs) {
  std::istringstream empty("");
  EXPECT_FALSE(ParseCsvDataset(empty, NativeCsvSchema()).ok());
  std::istringstream header_only("x0,y\n");
  EXPECT_FALSE(ParseCsvDataset(header_only, NativeCsvSchema()).ok());
  std::istringstream blank("\n  \n");
  EXPECT_FALSE(ParseCsvDataset(blank, VertebralSchema()).ok());
  EXPECT_EQ(LoadCsvDataset(DataPath("missing.csv"), NativeCsvSchema()).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(CsvTest, WriteThenReadRoundTripsExactly) {
  RandomStream rng = DeriveStream(1, StreamPurpose::kTest);
  const Dataset data = testing::RandomDataset(50, 3, BaseLearner::kRidge, rng);
  const std::string path = ::testing::TempDir() + "/roundtrip.csv";
  ASSERT_TRUE(WriteDatasetCsv(data, path).ok());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x0,x1,x2,y");
  absl::StatusOr<Dataset> back = LoadCsvDataset(path, NativeCsvSchema());
  ASSERT_TRUE(back.ok());
  ASSERT_EQ(back->size(), data.size());
  for (int i = 0; i < data.size(); ++i) {
    EXPECT_EQ(back->items[i].x, data.items[i].x);
    EXPECT_EQ(back->items[i].y, data.items[i].y);
  }
  std::remove(path.c_str());
}

TEST(NormalizeTest, ScalesLargestItemOntoUnitSphere) {
  absl::StatusOr<Dataset> raw =
      LoadCsvDataset(DataPath("wine_sample.csv"), WineSchema());
  ASSERT_TRUE(raw.ok());
  absl::StatusOr<Dataset> data = NormalizeDataset(*raw, true, 0.0, 10.0);
  ASSERT_TRUE(data.ok());
  double max_norm = 0.0;
  for (const LabeledItem& z : data->items) max_norm = std::max(max_norm, z.x.norm());
  EXPECT_NEAR(max_norm, 1.0, 1e-15);
  // Ratios between features are preserved.
  EXPECT_NEAR(data->items[0].x[0] / data->items[3].x[0], 7.4 / 11.2, 1e-15);
  EXPECT_NEAR(data->items[0].y, 0.0, 1e-15);   // quality 5
  EXPECT_NEAR(data->items[4].y, -0.4, 1e-15);  // quality 3
  EXPECT_NEAR(data->items[5].y, 0.6, 1e-15);   // quality 8
}

TEST(NormalizeTest, RejectsDegenerateInputs) {
  Dataset zeros{2, {{Vector::Zero(2), 1.0}}};
  EXPECT_FALSE(NormalizeDataset(zeros, false).ok());
  Dataset one{1, {{Vector::Ones(1), 1.0}}};
  EXPECT_FALSE(NormalizeDataset(one, true, 1.0, 1.0).ok());
  EXPECT_FALSE(NormalizeDataset(Dataset{1, {}}, false).ok());
}

TEST(NeighborEvalSetTest, MatchesBruteForceNearestNeighbors) {
  RandomStream data_rng = DeriveStream(2, StreamPurpose::kTest);
  const Dataset data = testing::RandomDataset(80, 3, BaseLearner::kLogistic, data_rng);
  for (int trial = 0; trial < 20; ++trial) {
    RandomStream rng = DeriveStream(trial, StreamPurpose::kEvalSet);
    absl::StatusOr<NeighborEvalSet> set = BuildNeighborEvalSet(data, 1.0, 10, false, rng);
    ASSERT_TRUE(set.ok());
    const int seed = set->seed_index;
    ASSERT_EQ(data.items[seed].y, 1.0);
    // Oracle: every non-member of the class is at least as far as every member.
    double farthest_member = 0.0;
    for (int i : set->members) {
      EXPECT_NE(i, seed);
      EXPECT_EQ(data.items[i].y, 1.0);
      farthest_member = std::max(
          farthest_member, (data.items[i].x - data.items[seed].x).norm());
    }
    for (int i = 0; i < data.size(); ++i) {
      if (data.items[i].y != 1.0 || i == seed ||
          std::count(set->members.begin(), set->members.end(), i)) {
        continue;
      }
      EXPECT_GE((data.items[i].x - data.items[seed].x).norm(), farthest_member);
    }
    ASSERT_EQ(set->eval_set.size(), 10);
    for (int r = 0; r < 10; ++r) {
      EXPECT_EQ(set->eval_set.items[r].x, data.items[set->members[r]].x);
      EXPECT_EQ(set->eval_set.items[r].y, -1.0);
    }
  }
}

TEST(NeighborEvalSetTest, OptionalSeedAndEdgeCounts) {
  RandomStream data_rng = DeriveStream(3, StreamPurpose::kTest);
  const Dataset data = testing::RandomDataset(30, 2, BaseLearner::kLogistic, data_rng);
  RandomStream a = DeriveStream(9, StreamPurpose::kEvalSet);
  absl::StatusOr<NeighborEvalSet> with_seed = BuildNeighborEvalSet(data, -1.0, 3, true, a);
  ASSERT_TRUE(with_seed.ok());
  ASSERT_EQ(with_seed->members.size(), 4u);
  EXPECT_EQ(with_seed->members[0], with_seed->seed_index);

  RandomStream b = DeriveStream(9, StreamPurpose::kEvalSet);
  absl::StatusOr<NeighborEvalSet> none = BuildNeighborEvalSet(data, -1.0, 0, false, b);
  ASSERT_TRUE(none.ok());
  EXPECT_TRUE(none->eval_set.empty());

  RandomStream c = DeriveStream(9, StreamPurpose::kEvalSet);
  EXPECT_FALSE(BuildNeighborEvalSet(data, 1.0, 30, false, c).ok());
  EXPECT_FALSE(BuildNeighborEvalSet(data, 1.0, -1, false, c).ok());
}

TEST(MinLabelEvalSetTest, PicksFirstSmallestLabel) {
  Dataset data{1, {{Vector::Constant(1, 0.1), 0.2},
                   {Vector::Constant(1, 0.2), -0.4},
                   {Vector::Constant(1, 0.3), -0.4}}};
  absl::StatusOr<Dataset> eval = MinLabelEvalSet(data, 1.0);
  ASSERT_TRUE(eval.ok());
  ASSERT_EQ(eval->size(), 1);
  EXPECT_EQ(eval->items[0].x[0], 0.2);
  EXPECT_EQ(eval->items[0].y, 1.0);
}

TEST(GridTest, OneDimensionalGridValues) {
  absl::StatusOr<Dataset> grid = EvalGrid1d(21);
  ASSERT_TRUE(grid.ok());
  ASSERT_EQ(grid->size(), 21);
  for (int i = 0; i < 21; ++i) {
    EXPECT_NEAR(grid->items[i].x[0], -1.0 + 0.1 * i, 1e-15);
    EXPECT_EQ(grid->items[i].y, i >= 10 ? 1.0 : -1.0);
  }
  EXPECT_FALSE(EvalGrid1d(1).ok());
}

TEST(GridTest, TwoDimensionalGridHas317PointsInUnitDisk) {
  absl::StatusOr<Dataset> grid = EvalGrid2d(317);
  ASSERT_TRUE(grid.ok());
  ASSERT_EQ(grid->size(), 317);
  int positive = 0;
  for (const LabeledItem& z : grid->items) {
    EXPECT_LE(z.x.norm(), 1.0 + 1e-15);
    EXPECT_EQ(z.y, z.x[0] >= 0 ? 1.0 : -1.0);
    positive += z.y > 0;
    // Points lie on the 0.1-spaced lattice.
    EXPECT_NEAR(z.x[0] * 10, std::round(z.x[0] * 10), 1e-12);
  }
  EXPECT_EQ(positive, 21 + (317 - 21) / 2);  // Column x = 0 plus half the rest.
  EXPECT_FALSE(EvalGrid2d(300).ok());
  EXPECT_EQ(EvalGrid2d(1)->size(), 1);
}

TEST(GeneratorTest, OneDimensionalData) {
  RandomStream rng = DeriveStream(4, StreamPurpose::kData);
  const Dataset data = Gen1dDataset(100000, rng);
  ASSERT_EQ(data.size(), 100000);
  int positive = 0;
  for (const LabeledItem& z : data.items) {
    EXPECT_LE(std::abs(z.x[0]), 1.0);
    EXPECT_EQ(z.y, z.x[0] >= 0 ? 1.0 : -1.0);
    positive += z.y > 0;
  }
  EXPECT_NEAR(positive / 1e5, 0.5, 0.01);
}

TEST(GeneratorTest, TwoDimensionalDataInUnitDisk) {
  RandomStream rng = DeriveStream(5, StreamPurpose::kData);
  const Vector theta_star{{1.0, 1.0}};
  const Dataset data = Gen2dDataset(100000, theta_star, rng);
  ASSERT_EQ(data.size(), 100000);
  int positive = 0;
  for (const LabeledItem& z : data.items) {
    EXPECT_LE(z.x.norm(), 1.0);
    EXPECT_EQ(z.y, z.x.dot(theta_star) >= 0 ? 1.0 : -1.0);
    positive += z.y > 0;
  }
  EXPECT_NEAR(positive / 1e5, 0.5, 0.01);
  RandomStream again = DeriveStream(5, StreamPurpose::kData);
  EXPECT_EQ(Gen2dDataset(10, theta_star, again).items[3].x, data.items[3].x);
}

}  // namespace
}  // namespace dppoison
