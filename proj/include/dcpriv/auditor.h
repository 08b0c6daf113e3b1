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

#ifndef DCPRIV_AUDITOR_H_
#define DCPRIV_AUDITOR_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dcpriv/calibrator.h"
#include "dcpriv/condenser.h"
#include "dcpriv/dataset.h"

namespace dcpriv {

enum class Mechanism { kSum, kCondense };

std::string_view MechanismName(Mechanism m);
// Throws UsageError for anything other than "sum" or "condense".
Mechanism ParseMechanism(std::string_view name);

inline constexpr size_t kMinAuditTrials = 100;
inline constexpr size_t kMinThresholdGrid = 3;
inline constexpr double kDefaultSlack = 0.25;

struct AuditConfig {
  Mechanism mechanism = Mechanism::kSum;
  size_t trials = 20000;
  uint64_t seed = 0;
  // Overrides the delta produced by calibration on the same data.
  std::optional<double> delta;
  double gamma = 0.0;
  // Neighbor values for the target record; defaults to the column bounds.
  std::optional<Bounds> target_bounds;
  size_t threshold_grid = 1001;
  double slack = kDefaultSlack;
  // Audited column; empty selects the first feature column.
  std::string column;
  // Mechanism settings when auditing the condenser. The per-trial seed is
  // derived from (seed, trial), so condense.seed is ignored.
  CondenseConfig condense;
  // Worker threads for trials. Results do not depend on this value.
  size_t threads = 1;

  // trials >= 100, threshold_grid >= 3, gamma in [0, 1), delta in [0, 1),
  // slack >= 0, threads >= 1. Throws UsageError.
  void Validate() const;
};

struct NeighborPair {
  Dataset d;        // record 0 of the audited column set to the lower value
  Dataset d_prime;  // record 0 of the audited column set to the upper value
};

NeighborPair MakeNeighbors(const Dataset& data, size_t column,
                           const Bounds& target_bounds);

enum class ThresholdRule {
  kAbove,  // guess D' when the statistic exceeds the threshold
  kBelow,  // guess D' when the statistic is below the threshold
};

std::string_view ThresholdRuleName(ThresholdRule r);

// Outcome of the threshold attack alone, at a fixed delta.
struct AttackResult {
  size_t trials = 0;
  size_t trials_d = 0;        // trials whose coin chose D
  size_t trials_d_prime = 0;  // trials whose coin chose D'
  double raw_fp = 0.0;
  double raw_fn = 0.0;
  double fp_rate = 0.0;  // floored at 1 / trials
  double fn_rate = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;  // finite; computed from floored rates
  double best_threshold = 0.0;
  ThresholdRule rule = ThresholdRule::kAbove;
  bool clamped = false;
  // The raw rates at the chosen threshold give an unbounded epsilon.
  bool unbounded = false;
};

// Runs the Monte Carlo membership game. Each trial draws from a stream keyed
// by (seed, trial): a fair coin picks D or D', the non-target records are
// resampled from the column's empirical distribution (stratified by class for
// the condenser), the mechanism runs, and the attacker records a scalar
// statistic. For the sum, the statistic is the released sum minus the exact
// contribution of the floor(gamma n) compromised records; for the condenser
// it is the distance from the D' target row to the nearest synthetic row.
// epsilon is the maximum over the threshold grid and both rules; ties keep
// the smaller threshold. delta >= 1 makes every bound vacuous and yields a
// clamped 0.
AttackResult RunAttack(const Dataset& data, const AuditConfig& config, double delta);

enum class Verdict { kConsistent, kViolationSuspected };

std::string_view VerdictName(Verdict v);

struct EmpiricalEpsilon {
  double value = 0.0;
  bool unbounded = false;
  double delta = 0.0;
};

// Consistent iff the empirical value is within slack of the theoretical one;
// unbounded is always a suspected violation. Throws UsageError when the two
// sides were computed at different deltas.
Verdict Reconcile(const EmpiricalEpsilon& empirical, double theoretical,
                  double theoretical_delta, double slack);

struct AuditReport {
  Mechanism mechanism = Mechanism::kSum;
  std::string column;
  double gamma = 0.0;
  size_t trials = 0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  double epsilon_empirical = 0.0;
  double epsilon_theoretical = 0.0;
  double delta_theoretical = 0.0;
  Provenance theoretical_provenance = Provenance::kDefaultThreat;
  double delta_used = 0.0;
  bool delta_overridden = false;
  double best_threshold = 0.0;
  ThresholdRule rule = ThresholdRule::kAbove;
  double slack = kDefaultSlack;
  Verdict verdict = Verdict::kConsistent;
  bool clamped = false;
  bool unbounded = false;
  bool vacuous_delta = false;
};

// Calibrates the audited column (propagating DegenerateDataError and other
// calibration failures), runs the attack at the calibrated or overridden
// delta and reconciles the two epsilons.
AuditReport RunAudit(const Dataset& data, const AuditConfig& config);

}  // namespace dcpriv

#endif  // DCPRIV_AUDITOR_H_
