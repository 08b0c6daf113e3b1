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

#ifndef DCPRIV_CONDENSER_H_
#define DCPRIV_CONDENSER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dcpriv/dataset.h"

namespace dcpriv {

enum class EmbeddingKind {
  kRandomFeatures,
  // phi(x) = x. Exposed so that closed-form minimizers can be checked.
  kIdentity,
};

struct CondenseConfig {
  size_t m_per_class = 10;
  size_t iters = 200;
  double step_size = 0.5;
  uint64_t seed = 0;
  size_t feature_dim = 64;
  double loss_tol = 1e-12;
  EmbeddingKind embedding = EmbeddingKind::kRandomFeatures;

  // Throws UsageError on iters == 0, m_per_class == 0, feature_dim == 0,
  // non-positive step or negative tolerance.
  void Validate() const;
};

// Frozen feature map. The random variant standardizes each input column with
// the source data's mean and standard deviation, then applies
// tanh(W z + c) with W, c drawn from a counter-based stream keyed by the seed.
class Embedding {
 public:
  static Embedding Identity(size_t input_dim);
  static Embedding RandomFeatures(size_t feature_dim, uint64_t seed,
                                  std::vector<double> center,
                                  std::vector<double> scale);
  // Builds the embedding selected by config for this dataset's schema.
  static Embedding ForDataset(const Dataset& data, const CondenseConfig& config);

  size_t input_dim() const { return input_dim_; }
  size_t output_dim() const { return output_dim_; }
  EmbeddingKind kind() const { return kind_; }

  void Apply(std::span<const double> x, std::span<double> out) const;

  // grad_x += J(x)^T upstream, with J the Jacobian of Apply at x.
  void AccumulateInputGradient(std::span<const double> x,
                               std::span<const double> upstream,
                               std::span<double> grad_x) const;

 private:
  EmbeddingKind kind_ = EmbeddingKind::kIdentity;
  size_t input_dim_ = 0;
  size_t output_dim_ = 0;
  std::vector<double> weights_;  // output_dim x input_dim, row-major
  std::vector<double> bias_;
  std::vector<double> center_;
  std::vector<double> inv_scale_;
};

// The condensed set S: m rows per class over the source schema.
struct SyntheticSet {
  std::vector<std::string> feature_names;
  std::vector<Bounds> bounds;
  std::vector<bool> bounds_declared;
  std::string label_name;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;

  size_t m() const { return rows.size(); }
  Dataset ToDataset() const;
};

struct MatchLoss {
  double value = 0.0;
};

// Squared distance between per-class mean embedded features of S and T,
// summed over classes in ascending label order. Class targets are
// accumulated over lexicographically sorted rows, so the objective does not
// depend on the row order of T.
class MatchObjective {
 public:
  // Requires a labeled dataset; the embedding input width must match.
  MatchObjective(const Dataset& data, Embedding embedding);

  const std::vector<std::string>& classes() const { return classes_; }
  const Embedding& embedding() const { return embedding_; }
  // Sorted source rows of class c.
  const std::vector<std::vector<double>>& class_rows(size_t c) const {
    return class_rows_[c];
  }

  // Throws UsageError when S's schema differs or some class has no rows.
  double Loss(const SyntheticSet& synth) const;
  // Gradient with respect to every synthetic value, same shape as rows.
  std::vector<std::vector<double>> Gradient(const SyntheticSet& synth) const;

 private:
  std::vector<size_t> ClassOfRows(const SyntheticSet& synth) const;
  // Per-class embedded mean of S minus target, and per-class row counts.
  void Residuals(const SyntheticSet& synth, const std::vector<size_t>& cls,
                 std::vector<std::vector<double>>& diff,
                 std::vector<size_t>& counts) const;

  std::vector<std::string> feature_names_;
  std::vector<std::string> classes_;
  std::vector<std::vector<std::vector<double>>> class_rows_;
  std::vector<std::vector<double>> targets_;
  Embedding embedding_;
};

MatchLoss ComputeMatchLoss(const Dataset& data, const SyntheticSet& synth,
                           const Embedding& embedding);

struct CondenseResult {
  SyntheticSet synth;
  // Initial loss followed by the loss after every accepted step.
  std::vector<double> loss_trace;
  size_t iterations = 0;
  // Some class had fewer records than m_per_class.
  bool oversampled = false;
};

// Full-batch gradient descent on the matching loss. A rejected step halves the
// step size (at most 30 times per iteration). The run takes at most iters
// accepted steps and ends early once the improvement falls below loss_tol or
// no step is accepted. Rows start at seeded draws of real records of their class
// and are projected onto the column bounds after every update.
CondenseResult Condense(const Dataset& data, const CondenseConfig& config);

}  // namespace dcpriv

#endif  // DCPRIV_CONDENSER_H_
