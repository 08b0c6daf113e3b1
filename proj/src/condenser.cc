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

#include "dcpriv/condenser.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "dcpriv/error.h"
#include "dcpriv/rng.h"
#include "dcpriv/stats.h"

namespace dcpriv {
namespace {

constexpr uint64_t kEmbeddingStream = 0x656d6265;  // "embe"
constexpr uint64_t kInitStream = 0x696e6974;       // "init"
constexpr int kMaxHalvings = 30;

void Project(SyntheticSet& s) {
  for (auto& row : s.rows) {
    for (size_t j = 0; j < row.size(); ++j) row[j] = s.bounds[j].Clip(row[j]);
  }
}

}  // namespace

void CondenseConfig::Validate() const {
  if (iters == 0) throw UsageError("condense: iters must be >= 1");
  if (m_per_class == 0) throw UsageError("condense: per-class count must be >= 1");
  if (feature_dim == 0) throw UsageError("condense: feature dimension must be >= 1");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw UsageError("condense: step size must be positive");
  }
  if (!(loss_tol >= 0.0)) throw UsageError("condense: loss tolerance must be >= 0");
}

Embedding Embedding::Identity(size_t input_dim) {
  Embedding e;
  e.kind_ = EmbeddingKind::kIdentity;
  e.input_dim_ = input_dim;
  e.output_dim_ = input_dim;
  return e;
}

Embedding Embedding::RandomFeatures(size_t feature_dim, uint64_t seed,
                                    std::vector<double> center,
                                    std::vector<double> scale) {
  if (center.size() != scale.size()) {
    throw UsageError("embedding center and scale widths differ");
  }
  Embedding e;
  e.kind_ = EmbeddingKind::kRandomFeatures;
  e.input_dim_ = center.size();
  e.output_dim_ = feature_dim;
  e.center_ = std::move(center);
  e.inv_scale_.reserve(scale.size());
  for (double s : scale) {
    if (!(s > 0.0)) throw DomainError("embedding scale must be positive");
    e.inv_scale_.push_back(1.0 / s);
  }
  CounterRng rng({seed, kEmbeddingStream});
  e.weights_.resize(feature_dim * e.input_dim_);
  for (double& w : e.weights_) w = rng.NextGaussian();
  e.bias_.resize(feature_dim);
  for (double& b : e.bias_) b = 0.5 * rng.NextGaussian();
  return e;
}

Embedding Embedding::ForDataset(const Dataset& data, const CondenseConfig& config) {
  if (config.embedding == EmbeddingKind::kIdentity) {
    return Identity(data.num_features());
  }
  std::vector<double> center, scale;
  for (const Column& c : data.columns) {
    const MomentSummary m = Summarize(c.values);
    center.push_back(m.mean);
    // Constant columns fall back to the bound half-width.
    scale.push_back(m.var > 0.0 ? std::sqrt(m.var)
                                : 0.5 * (c.bounds.upper - c.bounds.lower));
  }
  return RandomFeatures(config.feature_dim, config.seed, std::move(center),
                        std::move(scale));
}

void Embedding::Apply(std::span<const double> x, std::span<double> out) const {
  if (kind_ == EmbeddingKind::kIdentity) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  for (size_t k = 0; k < output_dim_; ++k) {
    double pre = bias_[k];
    const double* w = &weights_[k * input_dim_];
    for (size_t j = 0; j < input_dim_; ++j) {
      pre += w[j] * (x[j] - center_[j]) * inv_scale_[j];
    }
    out[k] = std::tanh(pre);
  }
}

void Embedding::AccumulateInputGradient(std::span<const double> x,
                                        std::span<const double> upstream,
                                        std::span<double> grad_x) const {
  if (kind_ == EmbeddingKind::kIdentity) {
    for (size_t j = 0; j < input_dim_; ++j) grad_x[j] += upstream[j];
    return;
  }
  std::vector<double> phi(output_dim_);
  Apply(x, phi);
  for (size_t k = 0; k < output_dim_; ++k) {
    const double g = upstream[k] * (1.0 - phi[k] * phi[k]);
    const double* w = &weights_[k * input_dim_];
    for (size_t j = 0; j < input_dim_; ++j) grad_x[j] += g * w[j] * inv_scale_[j];
  }
}

Dataset SyntheticSet::ToDataset() const {
  Dataset d;
  for (size_t j = 0; j < feature_names.size(); ++j) {
    Column c{feature_names[j], {}, bounds[j],
             j < bounds_declared.size() && bounds_declared[j]};
    c.values.reserve(rows.size());
    for (const auto& r : rows) c.values.push_back(r[j]);
    d.columns.push_back(std::move(c));
  }
  d.label_name = label_name;
  d.labels = labels;
  return d;
}

MatchObjective::MatchObjective(const Dataset& data, Embedding embedding)
    : feature_names_(data.FeatureNames()),
      classes_(data.Classes()),
      embedding_(std::move(embedding)) {
  if (embedding_.input_dim() != data.num_features()) {
    throw UsageError("embedding width does not match the dataset schema");
  }
  std::map<std::string, size_t> index;
  for (size_t c = 0; c < classes_.size(); ++c) index[classes_[c]] = c;
  class_rows_.resize(classes_.size());
  for (size_t i = 0; i < data.n(); ++i) {
    class_rows_[index.at(data.labels[i])].push_back(data.Row(i));
  }
  const size_t d = embedding_.output_dim();
  std::vector<double> phi(d);
  targets_.resize(classes_.size());
  for (size_t c = 0; c < classes_.size(); ++c) {
    auto& rows = class_rows_[c];
    std::sort(rows.begin(), rows.end());
    std::vector<long double> acc(d, 0.0L);
    for (const auto& r : rows) {
      embedding_.Apply(r, phi);
      for (size_t k = 0; k < d; ++k) acc[k] += phi[k];
    }
    targets_[c].resize(d);
    for (size_t k = 0; k < d; ++k) {
      targets_[c][k] = static_cast<double>(acc[k] / static_cast<long double>(rows.size()));
    }
  }
}

std::vector<size_t> MatchObjective::ClassOfRows(const SyntheticSet& synth) const {
  if (synth.feature_names != feature_names_) {
    throw UsageError("synthetic set schema does not match the source dataset");
  }
  if (synth.labels.size() != synth.rows.size()) {
    throw UsageError("synthetic set has mismatched row and label counts");
  }
  std::vector<size_t> cls(synth.rows.size());
  std::vector<size_t> counts(classes_.size(), 0);
  for (size_t i = 0; i < synth.rows.size(); ++i) {
    if (synth.rows[i].size() != feature_names_.size()) {
      throw UsageError("synthetic row width does not match the schema");
    }
    const auto it = std::lower_bound(classes_.begin(), classes_.end(), synth.labels[i]);
    if (it == classes_.end() || *it != synth.labels[i]) {
      throw UsageError("synthetic label \"" + synth.labels[i] +
                       "\" is not a class of the source dataset");
    }
    cls[i] = static_cast<size_t>(it - classes_.begin());
    ++counts[cls[i]];
  }
  for (size_t c = 0; c < classes_.size(); ++c) {
    if (counts[c] == 0) {
      throw UsageError("synthetic set has no rows for class \"" + classes_[c] + "\"");
    }
  }
  return cls;
}

void MatchObjective::Residuals(const SyntheticSet& synth,
                               const std::vector<size_t>& cls,
                               std::vector<std::vector<double>>& diff,
                               std::vector<size_t>& counts) const {
  const size_t d = embedding_.output_dim();
  diff.assign(classes_.size(), std::vector<double>(d, 0.0));
  counts.assign(classes_.size(), 0);
  std::vector<double> phi(d);
  for (size_t i = 0; i < synth.rows.size(); ++i) {
    embedding_.Apply(synth.rows[i], phi);
    for (size_t k = 0; k < d; ++k) diff[cls[i]][k] += phi[k];
    ++counts[cls[i]];
  }
  for (size_t c = 0; c < classes_.size(); ++c) {
    const double inv = 1.0 / static_cast<double>(counts[c]);
    for (size_t k = 0; k < d; ++k) diff[c][k] = diff[c][k] * inv - targets_[c][k];
  }
}

double MatchObjective::Loss(const SyntheticSet& synth) const {
  const std::vector<size_t> cls = ClassOfRows(synth);
  std::vector<std::vector<double>> diff;
  std::vector<size_t> counts;
  Residuals(synth, cls, diff, counts);
  double total = 0.0;
  for (const auto& dc : diff) {
    double term = 0.0;
    for (double v : dc) term += v * v;
    total += term;
  }
  return total;
}

std::vector<std::vector<double>> MatchObjective::Gradient(
    const SyntheticSet& synth) const {
  const std::vector<size_t> cls = ClassOfRows(synth);
  std::vector<std::vector<double>> diff;
  std::vector<size_t> counts;
  Residuals(synth, cls, diff, counts);
  std::vector<std::vector<double>> grad(
      synth.rows.size(), std::vector<double>(feature_names_.size(), 0.0));
  std::vector<double> upstream(embedding_.output_dim());
  for (size_t i = 0; i < synth.rows.size(); ++i) {
    const double scale = 2.0 / static_cast<double>(counts[cls[i]]);
    for (size_t k = 0; k < upstream.size(); ++k) upstream[k] = scale * diff[cls[i]][k];
    embedding_.AccumulateInputGradient(synth.rows[i], upstream, grad[i]);
  }
  return grad;
}

MatchLoss ComputeMatchLoss(const Dataset& data, const SyntheticSet& synth,
                           const Embedding& embedding) {
  if (!data.has_labels()) throw UsageError("match loss requires a labeled dataset");
  return MatchLoss{MatchObjective(data, embedding).Loss(synth)};
}

CondenseResult Condense(const Dataset& data, const CondenseConfig& config) {
  config.Validate();
  if (!data.has_labels()) {
    throw UsageError("condensation requires a label column");
  }
  data.Validate();
  if (config.embedding == EmbeddingKind::kIdentity &&
      config.feature_dim != data.num_features()) {
    throw UsageError("identity embedding requires feature_dim equal to the input width");
  }
  const MatchObjective objective(data, Embedding::ForDataset(data, config));
  const auto& classes = objective.classes();

  CondenseResult result;
  SyntheticSet& s = result.synth;
  s.feature_names = data.FeatureNames();
  s.label_name = *data.label_name;
  for (const Column& c : data.columns) {
    s.bounds.push_back(c.bounds);
    s.bounds_declared.push_back(c.bounds_declared);
  }

  for (size_t c = 0; c < classes.size(); ++c) {
    const auto& pool = objective.class_rows(c);
    if (pool.empty()) throw DomainError("class \"" + classes[c] + "\" has no records");
    const bool distinct = config.m_per_class <= pool.size();
    if (!distinct) result.oversampled = true;
    std::vector<bool> used(pool.size(), false);
    for (size_t slot = 0; slot < config.m_per_class; ++slot) {
      CounterRng rng({config.seed, kInitStream, c, slot});
      size_t idx = rng.NextBelow(pool.size());
      while (distinct && used[idx]) idx = rng.NextBelow(pool.size());
      used[idx] = true;
      s.rows.push_back(pool[idx]);
      s.labels.push_back(classes[c]);
    }
  }
  Project(s);

  // Each row's step is scaled by its class size so that the class-mean update
  // does not shrink as m_per_class grows.
  double loss = objective.Loss(s);
  result.loss_trace.push_back(loss);
  double step = config.step_size;
  const double row_scale = static_cast<double>(config.m_per_class);
  while (result.iterations < config.iters && loss > 0.0) {
    const auto grad = objective.Gradient(s);
    SyntheticSet candidate = s;
    double candidate_loss = loss;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      for (size_t i = 0; i < s.rows.size(); ++i) {
        for (size_t j = 0; j < s.rows[i].size(); ++j) {
          candidate.rows[i][j] = s.rows[i][j] - step * row_scale * grad[i][j];
        }
      }
      Project(candidate);
      candidate_loss = objective.Loss(candidate);
      if (candidate_loss <= loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double improvement = loss - candidate_loss;
    s = std::move(candidate);
    loss = candidate_loss;
    result.loss_trace.push_back(loss);
    ++result.iterations;
    if (improvement < config.loss_tol || improvement == 0.0) break;
  }
  return result;
}

}  // namespace dcpriv
