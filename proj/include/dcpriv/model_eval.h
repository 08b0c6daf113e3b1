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

#ifndef DCPRIV_MODEL_EVAL_H_
#define DCPRIV_MODEL_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcpriv/dataset.h"

namespace dcpriv {

enum class TrainedOn { kOriginal, kSynthetic };

std::string_view TrainedOnName(TrainedOn t);

// Multinomial logistic regression over standardized features.
struct LinearModel {
  std::vector<std::string> feature_names;
  std::vector<std::string> classes;  // sorted
  std::vector<double> center;        // per feature
  std::vector<double> inv_scale;     // per feature
  // classes.size() x (features + 1); last entry of each row is the bias.
  std::vector<std::vector<double>> weights;
  TrainedOn trained_on = TrainedOn::kOriginal;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> loss_trace;

  // Index into classes of the arg-max score; ties go to the smaller index.
  size_t Predict(const std::vector<double>& x) const;
};

struct TrainParams {
  size_t epochs = 200;
  double lr = 1.0;
  uint64_t seed = 0;
};

// Full-batch gradient descent on mean cross-entropy with the same halving
// rule as the condenser, so the loss trace is non-increasing. Throws
// UsageError without labels or with epochs == 0, DomainError with fewer than
// two classes.
LinearModel Train(const Dataset& data, const TrainParams& params,
                  TrainedOn trained_on = TrainedOn::kOriginal);

double CrossEntropy(const LinearModel& model, const Dataset& data);

struct EvalResult {
  double accuracy = 0.0;
  // Sorted union of model classes and test labels; confusion[true][pred].
  std::vector<std::string> labels;
  std::vector<std::vector<size_t>> confusion;
  size_t n = 0;
  // Binary tasks only. The positive class is the lexicographically larger
  // label; fp_rate = FP / negatives, fn_rate = FN / positives.
  std::optional<std::string> positive_label;
  std::optional<size_t> fp_count, fn_count;
  std::optional<double> fp_rate, fn_rate;
};

// Throws UsageError when the test schema differs from the model's.
EvalResult Evaluate(const LinearModel& model, const Dataset& test);

// accuracy(trained on original) - accuracy(trained on synthetic), both
// measured on test.
double UtilityGap(const Dataset& original, const Dataset& synthetic,
                  const Dataset& test, const TrainParams& params);

}  // namespace dcpriv

#endif  // DCPRIV_MODEL_EVAL_H_
