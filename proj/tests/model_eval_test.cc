// Copyright 2026 The dcpriv Authors
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

#include "dcpriv/model_eval.h"

#include <cmath>

#include "gtest/gtest.h"
#include "dcpriv/error.h"
#include "dcpriv/rng.h"
#include "test_util.h"

namespace dcpriv {
namespace {

Dataset Labeled(const std::vector<std::vector<double>>& rows,
                const std::vector<std::string>& labels) {
  Dataset d;
  d.columns.push_back(Column{"x", {}, {-10, 10}, true});
  d.columns.push_back(Column{"y", {}, {-10, 10}, true});
  d.label_name = "label";
  for (size_t i = 0; i < rows.size(); ++i) {
    d.columns[0].values.push_back(rows[i][0]);
    d.columns[1].values.push_back(rows[i][1]);
  }
  d.labels = labels;
  return d;
}

Dataset Xor(size_t copies) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (size_t c = 0; c < copies; ++c) {
    rows.insert(rows.end(), {{0, 0}, {1, 1}, {0, 1}, {1, 0}});
    labels.insert(labels.end(), {"a", "a", "b", "b"});
  }
  return Labeled(rows, labels);
}

// A model that ignores its input and always predicts `winner`.
LinearModel Constant(const Dataset& like, size_t winner) {
  LinearModel m;
  m.feature_names = like.FeatureNames();
  m.classes = {"a", "b"};
  m.center = {0.0, 0.0};
  m.inv_scale = {1.0, 1.0};
  m.weights = {{0, 0, 0}, {0, 0, 0}};
  m.weights[winner][2] = 1.0;
  return m;
}

TEST(TrainTest, SeparableDataIsClassifiedPerfectly) {
  const Dataset d = testing::TwoGaussians(400, 1, 5.0);
  const LinearModel m = Train(d, {});
  EXPECT_EQ(Evaluate(m, d).accuracy, 1.0);
  EXPECT_LT(m.final_loss, m.initial_loss);
}

TEST(TrainTest, SingleEpochDoesNotIncreaseLoss) {
  for (uint64_t s = 0; s < 10; ++s) {
    const Dataset d = testing::TwoGaussians(100, s, 0.5);
    TrainParams p;
    p.epochs = 1;
    p.seed = s;
    p.lr = 100.0;  // forces the halving rule to engage
    const LinearModel m = Train(d, p);
    EXPECT_LE(m.final_loss, m.initial_loss);
    EXPECT_NEAR(CrossEntropy(m, d), m.final_loss, 1e-12);
  }
}

TEST(TrainTest, LossTraceIsNonIncreasing) {
  const LinearModel m = Train(testing::TwoGaussians(200, 5, 1.0), {});
  for (size_t i = 1; i < m.loss_trace.size(); ++i) {
    EXPECT_LE(m.loss_trace[i], m.loss_trace[i - 1]);
  }
}

TEST(TrainTest, XorIsNotLinearlySeparable) {
  const Dataset d = Xor(10);
  EXPECT_LE(Evaluate(Train(d, {}), d).accuracy, 0.75);
}

TEST(TrainTest, DeterministicForFixedSeed) {
  const Dataset d = testing::TwoGaussians(150, 8, 1.0);
  TrainParams p;
  p.seed = 42;
  const LinearModel a = Train(d, p);
  const LinearModel b = Train(d, p);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
}

TEST(TrainTest, Errors) {
  EXPECT_THROW(Train(testing::UniformColumn(10, 1), {}), UsageError);
  const Dataset one_class = Labeled({{0, 0}, {1, 1}}, {"a", "a"});
  EXPECT_THROW(Train(one_class, {}), DomainError);
  TrainParams zero;
  zero.epochs = 0;
  EXPECT_THROW(Train(testing::TwoGaussians(10, 1), zero), UsageError);
}

TEST(EvaluateTest, MajorityModelRates) {
  const Dataset d = testing::TwoGaussians(100, 3);
  const EvalResult r = Evaluate(Constant(d, 1), d);
  EXPECT_EQ(r.accuracy, 0.5);
  ASSERT_TRUE(r.positive_label.has_value());
  EXPECT_EQ(*r.positive_label, "b");
  EXPECT_EQ(*r.fp_rate, 1.0);
  EXPECT_EQ(*r.fn_rate, 0.0);
  EXPECT_EQ(*r.fp_count, 50u);
  EXPECT_EQ(*r.fn_count, 0u);
}

TEST(EvaluateTest, PerfectModelHasZeroErrorRates) {
  const Dataset d = testing::TwoGaussians(300, 4, 5.0);
  const EvalResult r = Evaluate(Train(d, {}), d);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(*r.fp_rate, 0.0);
  EXPECT_EQ(*r.fn_rate, 0.0);
}

TEST(EvaluateTest, AccuracyMatchesConfusionCounts) {
  for (uint64_t s = 0; s < 10; ++s) {
    const Dataset d = testing::TwoGaussians(200, s, 0.7);
    const EvalResult r = Evaluate(Train(d, {}), d);
    const double expected =
        static_cast<double>(r.n - *r.fp_count - *r.fn_count) / static_cast<double>(r.n);
    EXPECT_EQ(r.accuracy, expected);
    size_t total = 0;
    for (const auto& row : r.confusion) {
      for (size_t c : row) total += c;
    }
    EXPECT_EQ(total, r.n);
  }
}

TEST(EvaluateTest, ConfusionInvariantToRowOrder) {
  const Dataset d = testing::TwoGaussians(200, 6, 0.7);
  const LinearModel m = Train(d, {});
  Dataset p = d;
  CounterRng rng({91});
  for (size_t i = p.n() - 1; i > 0; --i) {
    const size_t j = rng.NextBelow(i + 1);
    for (Column& c : p.columns) std::swap(c.values[i], c.values[j]);
    std::swap(p.labels[i], p.labels[j]);
  }
  EXPECT_EQ(Evaluate(m, d).confusion, Evaluate(m, p).confusion);
}

TEST(EvaluateTest, SchemaMismatchIsUsageError) {
  const Dataset d = testing::TwoGaussians(20, 2);
  const LinearModel m = Train(d, {});
  Dataset renamed = d;
  renamed.columns[1].name = "z";
  EXPECT_THROW(Evaluate(m, renamed), UsageError);
}

TEST(UtilityGapTest, IdenticalTrainingSetsGiveZero) {
  const Dataset d = testing::TwoGaussians(200, 7, 1.0);
  EXPECT_EQ(UtilityGap(d, d, d, {}), 0.0);
}

TEST(UtilityGapTest, UninformativeSyntheticSetLosesAccuracy) {
  const Dataset d = testing::TwoGaussians(400, 7, 3.0);
  // Both classes sit at the same point, so nothing separates them.
  const Dataset flat = Labeled({{0, 0}, {0, 0}}, {"a", "b"});
  EXPECT_GT(UtilityGap(d, flat, d, {}), 0.0);
}

}  // namespace
}  // namespace dcpriv
