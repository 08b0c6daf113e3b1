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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dcpriv/error.h"
#include "dcpriv/rng.h"
#include "dcpriv/stats.h"

namespace dcpriv {
namespace {

constexpr uint64_t kWeightInitStream = 0x77696e69;  // "wini"
constexpr int kMaxHalvings = 30;

struct Design {
  std::vector<std::vector<double>> x;  // standardized, with trailing 1
  std::vector<size_t> y;
};

Design BuildDesign(const LinearModel& m, const Dataset& data) {
  Design d;
  d.x.reserve(data.n());
  d.y.reserve(data.n());
  for (size_t i = 0; i < data.n(); ++i) {
    std::vector<double> row(m.feature_names.size() + 1, 1.0);
    for (size_t j = 0; j < m.feature_names.size(); ++j) {
      row[j] = (data.columns[j].values[i] - m.center[j]) * m.inv_scale[j];
    }
    d.x.push_back(std::move(row));
    const auto it = std::lower_bound(m.classes.begin(), m.classes.end(), data.labels[i]);
    d.y.push_back(static_cast<size_t>(it - m.classes.begin()));
  }
  return d;
}

void Scores(const std::vector<std::vector<double>>& w, const std::vector<double>& x,
            std::vector<double>& out) {
  for (size_t c = 0; c < w.size(); ++c) {
    double s = 0.0;
    for (size_t j = 0; j < x.size(); ++j) s += w[c][j] * x[j];
    out[c] = s;
  }
}

// Mean cross-entropy; when grad is non-null it receives d loss / d w.
double Objective(const std::vector<std::vector<double>>& w, const Design& d,
                 std::vector<std::vector<double>>* grad) {
  const size_t k = w.size();
  std::vector<double> s(k);
  double total = 0.0;
  if (grad) {
    for (auto& row : *grad) std::fill(row.begin(), row.end(), 0.0);
  }
  for (size_t i = 0; i < d.x.size(); ++i) {
    Scores(w, d.x[i], s);
    const double mx = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (double v : s) z += std::exp(v - mx);
    const double log_z = mx + std::log(z);
    total += log_z - s[d.y[i]];
    if (grad) {
      for (size_t c = 0; c < k; ++c) {
        const double p = std::exp(s[c] - log_z) - (c == d.y[i] ? 1.0 : 0.0);
        for (size_t j = 0; j < d.x[i].size(); ++j) (*grad)[c][j] += p * d.x[i][j];
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(d.x.size());
  if (grad) {
    for (auto& row : *grad) {
      for (double& g : row) g *= inv_n;
    }
  }
  return total * inv_n;
}

void RequireSchema(const LinearModel& m, const Dataset& data) {
  if (data.FeatureNames() != m.feature_names) {
    throw UsageError("dataset schema does not match the model's features");
  }
  if (!data.has_labels()) throw UsageError("evaluation requires a label column");
}

}  // namespace

std::string_view TrainedOnName(TrainedOn t) {
  return t == TrainedOn::kOriginal ? "original" : "synthetic";
}

size_t LinearModel::Predict(const std::vector<double>& x) const {
  std::vector<double> z(x.size() + 1, 1.0);
  for (size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - center[j]) * inv_scale[j];
  std::vector<double> s(weights.size());
  Scores(weights, z, s);
  return static_cast<size_t>(std::max_element(s.begin(), s.end()) - s.begin());
}

LinearModel Train(const Dataset& data, const TrainParams& params, TrainedOn trained_on) {
  if (!data.has_labels()) throw UsageError("training requires a label column");
  if (params.epochs == 0) throw UsageError("training requires epochs >= 1");
  if (!(params.lr > 0.0) || !std::isfinite(params.lr)) {
    throw UsageError("learning rate must be positive");
  }
  data.Validate();

  LinearModel m;
  m.trained_on = trained_on;
  m.feature_names = data.FeatureNames();
  m.classes = data.Classes();
  if (m.classes.size() < 2) {
    throw DomainError("training requires at least two classes");
  }
  for (const Column& c : data.columns) {
    const MomentSummary s = Summarize(c.values);
    m.center.push_back(s.mean);
    m.inv_scale.push_back(s.var > 0.0 ? 1.0 / std::sqrt(s.var) : 1.0);
  }
  const Design design = BuildDesign(m, data);
  const size_t width = m.feature_names.size() + 1;

  m.weights.assign(m.classes.size(), std::vector<double>(width, 0.0));
  for (size_t c = 0; c < m.classes.size(); ++c) {
    CounterRng rng({params.seed, kWeightInitStream, c});
    for (double& w : m.weights[c]) w = 1e-3 * rng.NextGaussian();
  }

  auto grad = m.weights;
  double loss = Objective(m.weights, design, &grad);
  m.initial_loss = loss;
  m.loss_trace.push_back(loss);
  double lr = params.lr;
  auto candidate = m.weights;
  for (size_t epoch = 0; epoch < params.epochs; ++epoch) {
    bool accepted = false;
    double cand_loss = loss;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      for (size_t c = 0; c < candidate.size(); ++c) {
        for (size_t j = 0; j < width; ++j) {
          candidate[c][j] = m.weights[c][j] - lr * grad[c][j];
        }
      }
      cand_loss = Objective(candidate, design, nullptr);
      if (cand_loss <= loss) {
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;
    m.weights.swap(candidate);
    loss = Objective(m.weights, design, &grad);
    m.loss_trace.push_back(loss);
  }
  m.final_loss = loss;
  return m;
}

double CrossEntropy(const LinearModel& model, const Dataset& data) {
  RequireSchema(model, data);
  for (const std::string& y : data.labels) {
    if (!std::binary_search(model.classes.begin(), model.classes.end(), y)) {
      throw UsageError("label \"" + y + "\" is unknown to the model");
    }
  }
  return Objective(model.weights, BuildDesign(model, data), nullptr);
}

EvalResult Evaluate(const LinearModel& model, const Dataset& test) {
  RequireSchema(model, test);
  test.Validate();
  std::set<std::string> all(model.classes.begin(), model.classes.end());
  all.insert(test.labels.begin(), test.labels.end());

  EvalResult r;
  r.labels.assign(all.begin(), all.end());
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < r.labels.size(); ++i) index[r.labels[i]] = i;
  r.confusion.assign(r.labels.size(), std::vector<size_t>(r.labels.size(), 0));
  r.n = test.n();

  size_t correct = 0;
  for (size_t i = 0; i < test.n(); ++i) {
    const std::string& predicted = model.classes[model.Predict(test.Row(i))];
    const size_t t = index.at(test.labels[i]);
    const size_t p = index.at(predicted);
    ++r.confusion[t][p];
    if (t == p) ++correct;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n);

  if (r.labels.size() == 2) {
    r.positive_label = r.labels[1];
    const size_t negatives = r.confusion[0][0] + r.confusion[0][1];
    const size_t positives = r.confusion[1][0] + r.confusion[1][1];
    r.fp_count = r.confusion[0][1];
    r.fn_count = r.confusion[1][0];
    r.fp_rate = negatives ? static_cast<double>(*r.fp_count) / negatives : 0.0;
    r.fn_rate = positives ? static_cast<double>(*r.fn_count) / positives : 0.0;
  }
  return r;
}

double UtilityGap(const Dataset& original, const Dataset& synthetic,
                  const Dataset& test, const TrainParams& params) {
  const LinearModel full = Train(original, params, TrainedOn::kOriginal);
  const LinearModel condensed = Train(synthetic, params, TrainedOn::kSynthetic);
  return Evaluate(full, test).accuracy - Evaluate(condensed, test).accuracy;
}

}  // namespace dcpriv
