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

#include "dppoison/experiment.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "gtest/gtest.h"

namespace dppoison {
namespace {

namespace fs = std::filesystem;

nlohmann::ordered_json SmallConfig() {
  return nlohmann::ordered_json::parse(R"({
    "seed": 3,
    "victim": {"mechanism": "objective", "base": "logistic", "lambda": 10, "epsilon": 0.1},
    "data": {"source": "gen1d", "n": 21},
    "eval": {"source": "grid1d", "m": 21},
    "cost": {"goal": "label_aversion"},
    "attack": {"k": "n", "selection": "deep", "iterations": 20, "eval_samples": 50},
    "output": {"eval_every": 10}
  })");
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::path(::testing::TempDir()) / name;
  fs::remove_all(dir);
  return dir;
}

TEST(ConfigTest, DefaultsApply) {
  absl::StatusOr<ExperimentConfig> c = ParseExperimentConfig(SmallConfig());
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(c->attack.k, -1);
  EXPECT_EQ(c->attack.eta, 1.0);
  EXPECT_EQ(c->attack.m_select, 1000);
  EXPECT_EQ(c->attack.alpha, 1e-4);
  EXPECT_EQ(c->cost.loss, EvalLoss::kLogistic);
}

TEST(ConfigTest, EchoParsesBackToSameConfig) {
  absl::StatusOr<ExperimentConfig> c = ParseExperimentConfig(SmallConfig());
  ASSERT_TRUE(c.ok());
  const nlohmann::ordered_json echo = ExperimentConfigToJson(*c);
  absl::StatusOr<ExperimentConfig> back = ParseExperimentConfig(echo);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(ExperimentConfigToJson(*back).dump(), echo.dump());
}

TEST(ConfigTest, RejectsInvalidConfigs) {
  auto rejected = [](const char* patch) {
    nlohmann::ordered_json j = SmallConfig();
    j.merge_patch(nlohmann::ordered_json::parse(patch));
    return !ParseExperimentConfig(j).ok();
  };
  EXPECT_TRUE(rejected(R"({"sweep": {"over": "k", "values": [5, 3]}})"));
  EXPECT_TRUE(rejected(R"({"sweep": {"over": "k", "values": [1.5, 3]}})"));
  EXPECT_TRUE(rejected(R"({"sweep": {"over": "epsilon", "values": [0, 1]}})"));
  EXPECT_TRUE(rejected(R"({"sweep": {"over": "nothing"}})"));
  EXPECT_TRUE(rejected(R"({"victim": {"epsilon": -1}})"));
  EXPECT_TRUE(rejected(R"({"victim": {"base": "svm"}})"));
  EXPECT_TRUE(rejected(R"({"eval": {"source": "none"}})"));
  EXPECT_TRUE(rejected(R"({"data": {"source": "csv", "path": "/no/such/file.csv"}})"));
  EXPECT_TRUE(rejected(R"({"attack": {"iterations": "many"}})"));
  EXPECT_FALSE(rejected(R"({"sweep": {"over": "k", "values": [0, 3, 5]}})"));
}

TEST(ExperimentTest, EchoedConfigReproducesOutputsByteForByte) {
  absl::StatusOr<ExperimentConfig> c = ParseExperimentConfig(SmallConfig());
  ASSERT_TRUE(c.ok());
  ExperimentConfig first = *c;
  first.out_dir = FreshDir("echo_a").string();
  ExperimentConfig second = *ParseExperimentConfig(ExperimentConfigToJson(*c));
  second.out_dir = FreshDir("echo_b").string();
  const ExperimentResult a = RunExperiment(first);
  const ExperimentResult b = RunExperiment(second);
  ASSERT_TRUE(a.status.ok()) << a.status;
  ASSERT_TRUE(b.status.ok()) << b.status;
  for (const char* name : {"trace.csv", "curve.csv", "poisoned.csv"}) {
    const std::string bytes = ReadFile(fs::path(first.out_dir) / name);
    EXPECT_FALSE(bytes.empty()) << name;
    EXPECT_EQ(bytes, ReadFile(fs::path(second.out_dir) / name)) << name;
  }
  // Curve rows at iterations 0, 10 and 20.
  ASSERT_EQ(a.curve.size(), 3u);
  EXPECT_EQ(a.curve.back().x, 20.0);
  const auto summary = nlohmann::ordered_json::parse(
      ReadFile(fs::path(first.out_dir) / "summary.json"));
  EXPECT_EQ(summary["status"], "ok");
  EXPECT_EQ(summary["inputs"]["n"], 21);
}

TEST(ExperimentTest, BudgetSweepSharesCleanEstimate) {
  nlohmann::ordered_json j = SmallConfig();
  j.merge_patch(nlohmann::ordered_json::parse(
      R"({"sweep": {"over": "k", "values": [0, 5, 21]}})"));
  ExperimentConfig c = *ParseExperimentConfig(j);
  const ExperimentResult r = RunExperiment(c);
  ASSERT_TRUE(r.status.ok()) << r.status;
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_EQ(r.points[0].clean.mean, r.points[2].clean.mean);
  // With no modified items the poisoned data equals the clean data, and the
  // shared noise streams make the two estimates identical.
  EXPECT_EQ(r.points[0].poisoned.mean, r.points[0].clean.mean);
  EXPECT_EQ(r.points[2].selected.size(), 21u);
  EXPECT_TRUE(r.AllSound());
}

TEST(ExperimentTest, FailureKeepsCompletedPoints) {
  nlohmann::ordered_json j = SmallConfig();
  j.merge_patch(nlohmann::ordered_json::parse(
      R"({"sweep": {"over": "k", "values": [2, 40]}})"));
  ExperimentConfig c = *ParseExperimentConfig(j);
  c.out_dir = FreshDir("partial").string();
  const ExperimentResult r = RunExperiment(c);
  EXPECT_FALSE(r.status.ok());
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "poisoned_0.csv"));
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "curve.csv"));
  const auto summary = nlohmann::ordered_json::parse(
      ReadFile(fs::path(c.out_dir) / "summary.json"));
  EXPECT_NE(summary["status"], "ok");
  EXPECT_EQ(summary["points"].size(), 1u);
}

TEST(ShippedConfigTest, EveryConfigBuildsItsInputs) {
  const fs::path dir = fs::path(DPPOISON_SOURCE_DIR) / "configs";
  const std::map<std::string, std::string> fixtures = {
      {"vertebral", "vertebral_sample.dat"}, {"wine", "wine_sample.csv"}};
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(ReadFile(entry.path()));
    const std::string stem = entry.path().stem().string();
    for (const auto& [prefix, file] : fixtures) {
      if (stem.rfind(prefix, 0) != 0) continue;
      // The fixtures are small, so shrink the evaluation set and budget.
      j.merge_patch(nlohmann::ordered_json{
          {"data", {{"path", std::string(DPPOISON_TEST_DATA_DIR) + "/" + file}}},
          {"eval", {{"count", 2}}},
          {"attack", {{"k", 2}, {"iterations", 5}, {"eval_samples", 10}}}});
    }
    absl::StatusOr<ExperimentConfig> c = ParseExperimentConfig(j, dir.string());
    ASSERT_TRUE(c.ok()) << stem << ": " << c.status();
    absl::StatusOr<ExperimentInputs> inputs = BuildInputs(*c);
    ASSERT_TRUE(inputs.ok()) << stem << ": " << inputs.status();
    EXPECT_FALSE(inputs->cost.goal == AttackGoal::kLabelTargeting &&
                 inputs->cost.eval_set.empty())
        << stem;
    if (stem.rfind("wine", 0) == 0 || stem.rfind("vertebral", 0) == 0) {
      ExperimentConfig small = *c;
      small.sweep = {};
      small.out_dir.clear();
      const ExperimentResult r = RunExperiment(small);
      EXPECT_TRUE(r.status.ok()) << stem << ": " << r.status;
    }
  }
  EXPECT_EQ(seen, 9);
}

}  // namespace
}  // namespace dppoison
