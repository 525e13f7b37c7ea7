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

#include "dppoison/core.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace dppoison {
namespace {

Dataset SmallEvalSet() {
  Dataset eval{2, {}};
  eval.items.push_back({Vector{{0.5, 0.1}}, 1.0});
  eval.items.push_back({Vector{{-0.3, 0.7}}, -1.0});
  eval.items.push_back({Vector{{0.2, -0.9}}, 1.0});
  return eval;
}

TEST(EvalCostTest, ParameterTargetingAtTargetIsZero) {
  const CostSpec cost = ParameterTargetingCost(Vector{{2.6, 0.0}});
  absl::StatusOr<double> c = EvalCost(cost, {Vector{{2.6, 0.0}}, 0.0});
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(*c, 0.0);
}

TEST(EvalCostTest, ParameterTargetingAtOrigin) {
  const CostSpec cost = ParameterTargetingCost(Vector{{2.6, 0.0}});
  absl::StatusOr<double> c = EvalCost(cost, {Vector::Zero(2), 0.0});
  ASSERT_TRUE(c.ok());
  EXPECT_NEAR(*c, 3.38, 1e-12);
}

TEST(EvalCostTest, LabelTargetingAtZeroModelIsLogTwo) {
  const CostSpec cost = LabelTargetingCost(SmallEvalSet(), EvalLoss::kLogistic);
  absl::StatusOr<double> c = EvalCost(cost, {Vector::Zero(2), 0.0});
  ASSERT_TRUE(c.ok());
  EXPECT_NEAR(*c, std::log(2.0), 1e-15);
}

TEST(EvalCostTest, LabelTargetingMatchesDirectSum) {
  const Dataset eval = SmallEvalSet();
  const Vector theta{{1.5, -0.4}};
  double expected = 0.0;
  for (const LabeledItem& z : eval.items) {
    expected += std::log1p(std::exp(-z.y * z.x.dot(theta)));
  }
  expected /= eval.size();
  EXPECT_NEAR(EvalCostUnchecked(LabelTargetingCost(eval, EvalLoss::kLogistic),
                                theta),
              expected, 1e-14);
}

TEST(EvalCostTest, SquaredLossMatchesDirectSum) {
  const Dataset eval = SmallEvalSet();
  const Vector theta{{1.5, -0.4}};
  double expected = 0.0;
  for (const LabeledItem& z : eval.items) {
    expected += 0.5 * std::pow(z.x.dot(theta) - z.y, 2);
  }
  expected /= eval.size();
  EXPECT_NEAR(
      EvalCostUnchecked(LabelTargetingCost(eval, EvalLoss::kSquared), theta),
      expected, 1e-14);
}

TEST(EvalCostTest, AversionIsExactNegationOfTargeting) {
  RandomStream rng = DeriveStream(1, StreamPurpose::kTest);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset eval = testing::RandomDataset(7, 3, BaseLearner::kLogistic, rng);
    const Vector theta = testing::RandomInBall(3, 20.0, rng);
    for (EvalLoss loss : {EvalLoss::kLogistic, EvalLoss::kSquared}) {
      EXPECT_EQ(EvalCostUnchecked(LabelAversionCost(eval, loss), theta),
                -EvalCostUnchecked(LabelTargetingCost(eval, loss), theta));
    }
  }
}

TEST(EvalCostTest, InvariantUnderEvalSetPermutation) {
  RandomStream rng = DeriveStream(2, StreamPurpose::kTest);
  Dataset eval = testing::RandomDataset(9, 4, BaseLearner::kLogistic, rng);
  const Vector theta = testing::RandomInBall(4, 5.0, rng);
  const double before =
      EvalCostUnchecked(LabelTargetingCost(eval, EvalLoss::kLogistic), theta);
  std::shuffle(eval.items.begin(), eval.items.end(), rng);
  EXPECT_NEAR(
      EvalCostUnchecked(LabelTargetingCost(eval, EvalLoss::kLogistic), theta),
      before, 1e-14);
}

TEST(EvalCostTest, SignClassFollowsGoal) {
  EXPECT_EQ(ParameterTargetingCost(Vector::Zero(1)).sign(),
            CostSign::kNonNegative);
  EXPECT_EQ(LabelTargetingCost(SmallEvalSet(), EvalLoss::kLogistic).sign(),
            CostSign::kNonNegative);
  EXPECT_EQ(LabelAversionCost(SmallEvalSet(), EvalLoss::kLogistic).sign(),
            CostSign::kNonPositive);
}

TEST(EvalCostTest, RejectsDimensionMismatch) {
  const CostSpec cost = ParameterTargetingCost(Vector{{2.6, 0.0}});
  EXPECT_FALSE(EvalCost(cost, {Vector::Zero(3), 0.0}).ok());
  const CostSpec label = LabelTargetingCost(SmallEvalSet(), EvalLoss::kLogistic);
  EXPECT_FALSE(EvalCost(label, {Vector::Zero(1), 0.0}).ok());
}

TEST(EvalCostTest, RejectsMissingTargetOrEvalSet) {
  CostSpec cost;
  cost.goal = AttackGoal::kParameterTargeting;
  EXPECT_FALSE(EvalCost(cost, {Vector::Zero(2), 0.0}).ok());
  cost.goal = AttackGoal::kLabelTargeting;
  cost.eval_set = Dataset{2, {}};
  EXPECT_FALSE(EvalCost(cost, {Vector::Zero(2), 0.0}).ok());
}

TEST(LogisticLossTest, StableAtExtremeMargins) {
  EXPECT_NEAR(LogisticLoss(0.0), std::log(2.0), 1e-16);
  EXPECT_NEAR(LogisticLoss(-800.0), 800.0, 1e-12);
  EXPECT_GE(LogisticLoss(800.0), 0.0);
  EXPECT_LT(LogisticLoss(800.0), 1e-300);
  EXPECT_NEAR(LogisticLoss(700.0), std::exp(-700.0), 1e-310);
  for (double m : {-30.0, -3.0, -0.1, 0.2, 4.0, 25.0}) {
    EXPECT_NEAR(LogisticLoss(m), std::log1p(std::exp(-m)), 1e-14);
    EXPECT_NEAR(SigmoidNeg(m), 1.0 / (1.0 + std::exp(m)), 1e-15);
  }
  EXPECT_EQ(SigmoidNeg(-1000.0), 1.0);
  EXPECT_EQ(SigmoidNeg(1000.0), 0.0);
}

TEST(ProjectItemTest, FeasibleItemUnchanged) {
  const LabeledItem in{Vector{{0.3, 0.4}}, 0.5};
  const LabeledItem out = ProjectItem(in);
  EXPECT_EQ(out.x, in.x);
  EXPECT_EQ(out.y, in.y);
}

TEST(ProjectItemTest, RescalesLongFeatures) {
  const LabeledItem out = ProjectItem({Vector{{3.0, 4.0}}, 0.5});
  EXPECT_NEAR(out.x[0], 0.6, 1e-15);
  EXPECT_NEAR(out.x[1], 0.8, 1e-15);
  EXPECT_EQ(out.y, 0.5);
}

TEST(ProjectItemTest, ClampsLabel) {
  EXPECT_EQ(ProjectItem({Vector{{0.1}}, 1.7}).y, 1.0);
  EXPECT_EQ(ProjectItem({Vector{{0.1}}, -3.0}).y, -1.0);
}

TEST(ProjectItemTest, IdempotentAndFeasibleOnRandomItems) {
  RandomStream rng = DeriveStream(3, StreamPurpose::kTest);
  std::uniform_real_distribution<double> scale(-6.0, 6.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int dim = 1 + trial % 11;
    LabeledItem item{testing::RandomInBall(dim, std::pow(10.0, scale(rng)), rng),
                     std::pow(10.0, scale(rng)) * (trial % 2 ? 1 : -1)};
    const LabeledItem once = ProjectItem(item);
    const LabeledItem twice = ProjectItem(once);
    ASSERT_LE(once.x.norm(), 1.0);
    ASSERT_LE(std::abs(once.y), 1.0);
    ASSERT_EQ(once.x, twice.x);
    ASSERT_EQ(once.y, twice.y);
  }
}

TEST(ModificationDistanceTest, IdenticalItemsAreZero) {
  const LabeledItem z{Vector{{0.2, -0.1}}, 0.3};
  for (BaseLearner base : {BaseLearner::kLogistic, BaseLearner::kRidge}) {
    absl::StatusOr<double> r = ModificationDistance(z, z, base);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(*r, 0.0);
  }
}

TEST(ModificationDistanceTest, LogisticIgnoresLabel) {
  absl::StatusOr<double> r = ModificationDistance(
      {Vector{{0.6, 0.8}}, 1.0}, {Vector{{0.0, 0.0}}, -1.0},
      BaseLearner::kLogistic);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(*r, 0.5, 1e-15);
}

TEST(ModificationDistanceTest, RidgeCountsLabel) {
  absl::StatusOr<double> r = ModificationDistance(
      {Vector{{1.0, 0.0}}, 1.0}, {Vector{{0.0, 0.0}}, 0.0}, BaseLearner::kRidge);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(*r, 1.0, 1e-15);
}

TEST(ModificationDistanceTest, SymmetricInTheDifference) {
  RandomStream rng = DeriveStream(4, StreamPurpose::kTest);
  for (int trial = 0; trial < 500; ++trial) {
    const LabeledItem a{testing::RandomInBall(3, 1.0, rng), 0.25};
    const LabeledItem b{testing::RandomInBall(3, 1.0, rng), -0.5};
    for (BaseLearner base : {BaseLearner::kLogistic, BaseLearner::kRidge}) {
      EXPECT_NEAR(*ModificationDistance(a, b, base),
                  *ModificationDistance(b, a, base), 1e-15);
    }
  }
}

TEST(ModificationDistanceTest, RejectsDimensionMismatch) {
  EXPECT_FALSE(ModificationDistance({Vector::Zero(2), 0.0},
                                    {Vector::Zero(3), 0.0},
                                    BaseLearner::kLogistic)
                   .ok());
}

}  // namespace
}  // namespace dppoison
