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

#include "dcpriv/auditor.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "dcpriv/error.h"
#include "dcpriv/rng.h"
#include "dcpriv/stats.h"

namespace dcpriv {
namespace {

constexpr uint64_t kTrialStream = 0x747269616c;  // "trial"

struct TrialOutcome {
  double statistic = 0.0;
  bool is_d_prime = false;
};

size_t ResolveColumn(const Dataset& data, const AuditConfig& config) {
  if (config.column.empty()) return 0;
  return data.column_index(config.column);
}

Bounds ResolveTargetBounds(const Dataset& data, size_t column,
                           const AuditConfig& config) {
  const Bounds b = config.target_bounds.value_or(data.columns[column].bounds);
  if (!(b.lower < b.upper)) {
    throw DomainError("audit target bounds must satisfy lower < upper");
  }
  return b;
}

class SumTrial {
 public:
  SumTrial(const Dataset& data, size_t column, Bounds target, double gamma)
      : values_(data.columns[column].values), target_(target) {
    const size_t n = values_.size();
    // The target record is never among the compromised ones.
    compromised_ = std::min(n - UncompromisedCount(n, gamma), n - 1);
  }

  TrialOutcome operator()(CounterRng& rng) const {
    TrialOutcome out;
    out.is_d_prime = rng.NextCoin();
    const size_t n = values_.size();
    double known = 0.0;
    double released = out.is_d_prime ? target_.upper : target_.lower;
    for (size_t i = 1; i < n; ++i) {
      const double v = values_[rng.NextBelow(n)];
      released += v;
      if (i <= compromised_) known += v;
    }
    out.statistic = released - known;
    return out;
  }

 private:
  const std::vector<double>& values_;
  Bounds target_;
  size_t compromised_ = 0;
};

class CondenseTrial {
 public:
  CondenseTrial(const Dataset& data, size_t column, Bounds target,
                const CondenseConfig& config, uint64_t seed)
      : data_(data), column_(column), target_(target), config_(config), seed_(seed) {
    if (!data.has_labels()) {
      throw UsageError("auditing the condenser requires a label column");
    }
    std::map<std::string, size_t> index;
    for (const std::string& c : data.Classes()) {
      index.emplace(c, class_members_.size());
      class_members_.emplace_back();
    }
    class_of_.reserve(data.n());
    for (size_t i = 0; i < data.n(); ++i) {
      class_of_.push_back(index.at(data.labels[i]));
      class_members_[class_of_.back()].push_back(i);
    }
    probe_ = data.Row(0);
    probe_[column] = target.upper;
  }

  TrialOutcome operator()(CounterRng& rng, size_t trial) const {
    TrialOutcome out;
    out.is_d_prime = rng.NextCoin();
    Dataset d = data_;
    for (size_t i = 1; i < d.n(); ++i) {
      const auto& pool = class_members_[class_of_[i]];
      const size_t src = pool[rng.NextBelow(pool.size())];
      for (size_t j = 0; j < d.columns.size(); ++j) {
        d.columns[j].values[i] = data_.columns[j].values[src];
      }
    }
    d.columns[column_].values[0] = out.is_d_prime ? target_.upper : target_.lower;
    CondenseConfig cfg = config_;
    cfg.seed = Mix64(seed_ ^ Mix64(trial));
    const CondenseResult result = Condense(d, cfg);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : result.synth.rows) {
      double sq = 0.0;
      for (size_t j = 0; j < row.size(); ++j) {
        const double diff = row[j] - probe_[j];
        sq += diff * diff;
      }
      best = std::min(best, sq);
    }
    out.statistic = std::sqrt(best);
    return out;
  }

 private:
  const Dataset& data_;
  size_t column_;
  Bounds target_;
  CondenseConfig config_;
  uint64_t seed_;
  std::vector<size_t> class_of_;
  std::vector<std::vector<size_t>> class_members_;
  std::vector<double> probe_;
};

// Runs fn(trial) for every trial on up to `threads` workers. Each outcome is
// stored at its trial index, so the result is independent of scheduling.
template <typename Fn>
std::vector<TrialOutcome> RunTrials(size_t trials, size_t threads, const Fn& fn) {
  std::vector<TrialOutcome> out(trials);
  const size_t workers = std::max<size_t>(1, std::min(threads, trials));
  if (workers == 1) {
    for (size_t t = 0; t < trials; ++t) out[t] = fn(t);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (size_t t = w; t < trials; t += workers) out[t] = fn(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double CountAbove(const std::vector<double>& sorted, double t) {
  return static_cast<double>(sorted.end() -
                             std::upper_bound(sorted.begin(), sorted.end(), t));
}

double CountBelow(const std::vector<double>& sorted, double t) {
  return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), t) -
                             sorted.begin());
}

}  // namespace

std::string_view MechanismName(Mechanism m) {
  return m == Mechanism::kSum ? "sum" : "condense";
}

Mechanism ParseMechanism(std::string_view name) {
  if (name == "sum") return Mechanism::kSum;
  if (name == "condense") return Mechanism::kCondense;
  throw UsageError("unknown mechanism \"" + std::string(name) +
                   "\" (expected sum or condense)");
}

std::string_view ThresholdRuleName(ThresholdRule r) {
  return r == ThresholdRule::kAbove ? "above" : "below";
}

std::string_view VerdictName(Verdict v) {
  return v == Verdict::kConsistent ? "consistent" : "violation_suspected";
}

void AuditConfig::Validate() const {
  if (trials < kMinAuditTrials) {
    throw UsageError("audit needs at least " + std::to_string(kMinAuditTrials) +
                     " trials, got " + std::to_string(trials));
  }
  if (threshold_grid < kMinThresholdGrid) {
    throw UsageError("threshold grid needs at least 3 points");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw UsageError("gamma must lie in [0, 1)");
  }
  if (delta && !(*delta >= 0.0 && *delta < 1.0)) {
    throw UsageError("delta must lie in [0, 1)");
  }
  if (!(slack >= 0.0) || !std::isfinite(slack)) {
    throw UsageError("slack must be a finite non-negative number");
  }
  if (threads == 0) throw UsageError("thread count must be >= 1");
  if (target_bounds && !(target_bounds->lower < target_bounds->upper)) {
    throw UsageError("target bounds must satisfy lower < upper");
  }
  if (mechanism == Mechanism::kCondense) condense.Validate();
}

NeighborPair MakeNeighbors(const Dataset& data, size_t column,
                           const Bounds& target_bounds) {
  if (data.n() == 0) throw DomainError("cannot build neighbors of an empty dataset");
  if (column >= data.num_features()) throw UsageError("audited column out of range");
  if (!(target_bounds.lower < target_bounds.upper)) {
    throw DomainError("neighbor values must satisfy lower < upper");
  }
  NeighborPair p{data, data};
  p.d.columns[column].values[0] = target_bounds.lower;
  p.d_prime.columns[column].values[0] = target_bounds.upper;
  return p;
}

AttackResult RunAttack(const Dataset& data, const AuditConfig& config, double delta) {
  config.Validate();
  data.Validate();
  if (!(delta >= 0.0)) throw UsageError("delta must be >= 0");
  const size_t column = ResolveColumn(data, config);
  const Bounds target = ResolveTargetBounds(data, column, config);

  std::vector<TrialOutcome> outcomes;
  if (config.mechanism == Mechanism::kSum) {
    const SumTrial trial(data, column, target, config.gamma);
    outcomes = RunTrials(config.trials, config.threads, [&](size_t t) {
      CounterRng rng({config.seed, kTrialStream, t});
      return trial(rng);
    });
  } else {
    const CondenseTrial trial(data, column, target, config.condense, config.seed);
    outcomes = RunTrials(config.trials, config.threads, [&](size_t t) {
      CounterRng rng({config.seed, kTrialStream, t});
      return trial(rng, t);
    });
  }

  std::vector<double> neg, pos;
  for (const TrialOutcome& o : outcomes) {
    (o.is_d_prime ? pos : neg).push_back(o.statistic);
  }
  if (neg.empty() || pos.empty()) {
    throw DomainError("every trial chose the same neighbor; increase trials");
  }
  std::sort(neg.begin(), neg.end());
  std::sort(pos.begin(), pos.end());
  const double lo = std::min(neg.front(), pos.front());
  const double hi = std::max(neg.back(), pos.back());
  const double n_neg = static_cast<double>(neg.size());
  const double n_pos = static_cast<double>(pos.size());
  const double floor_rate = 1.0 / static_cast<double>(config.trials);

  AttackResult r;
  r.trials = config.trials;
  r.trials_d = neg.size();
  r.trials_d_prime = pos.size();
  r.delta = delta;
  const bool vacuous = delta >= 1.0;

  // Score used to rank thresholds: the epsilon of the floored rates, or
  // -(FP + FN) when delta leaves no constraint.
  double best_score = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  const size_t grid = config.threshold_grid;
  for (size_t g = 0; g < grid; ++g) {
    const double t = g + 1 == grid
                         ? hi
                         : lo + (hi - lo) * static_cast<double>(g) /
                                    static_cast<double>(grid - 1);
    for (ThresholdRule rule : {ThresholdRule::kAbove, ThresholdRule::kBelow}) {
      double fp, fn;
      if (rule == ThresholdRule::kAbove) {
        fp = CountAbove(neg, t) / n_neg;
        fn = (n_pos - CountAbove(pos, t)) / n_pos;
      } else {
        fp = CountBelow(neg, t) / n_neg;
        fn = (n_pos - CountBelow(pos, t)) / n_pos;
      }
      const double fp_floor = std::max(fp, floor_rate);
      const double fn_floor = std::max(fn, floor_rate);
      double score;
      RateEpsilon eps;
      if (vacuous) {
        score = -(fp_floor + fn_floor);
        eps.clamped = true;
      } else {
        eps = EpsilonFromRates({fp_floor, fn_floor, delta});
        // Clamped candidates compete on the raw (negative) log bound so that
        // the least-bad threshold is reported.
        score = eps.clamped
                    ? std::max(std::log(std::max(1.0 - delta - fp_floor, 0.0) / fn_floor),
                               std::log(std::max(1.0 - delta - fn_floor, 0.0) / fp_floor))
                    : eps.value;
      }
      if (!have_best || score > best_score) {
        have_best = true;
        best_score = score;
        r.raw_fp = fp;
        r.raw_fn = fn;
        r.fp_rate = fp_floor;
        r.fn_rate = fn_floor;
        r.epsilon = eps.clamped ? 0.0 : eps.value;
        r.clamped = eps.clamped;
        r.best_threshold = t;
        r.rule = rule;
      }
    }
  }
  if (!vacuous) {
    r.unbounded = EpsilonFromRates({r.raw_fp, r.raw_fn, delta}).unbounded;
  }
  return r;
}

Verdict Reconcile(const EmpiricalEpsilon& empirical, double theoretical,
                  double theoretical_delta, double slack) {
  if (empirical.delta != theoretical_delta) {
    throw UsageError("empirical and theoretical epsilon were computed at different deltas");
  }
  if (empirical.unbounded) return Verdict::kViolationSuspected;
  return empirical.value <= theoretical + slack ? Verdict::kConsistent
                                                : Verdict::kViolationSuspected;
}

AuditReport RunAudit(const Dataset& data, const AuditConfig& config) {
  config.Validate();
  data.Validate();
  if (config.mechanism == Mechanism::kCondense && !data.has_labels()) {
    throw UsageError("auditing the condenser requires a label column");
  }
  const size_t column = ResolveColumn(data, config);
  const Bounds target = ResolveTargetBounds(data, column, config);

  const MomentSummary moments = Summarize(data.columns[column].values);
  const PrivacyParams theory =
      CalibrateColumn(moments, SensitivityOf(target), config.gamma);

  AuditReport rep;
  rep.mechanism = config.mechanism;
  rep.column = data.columns[column].name;
  rep.gamma = config.gamma;
  rep.trials = config.trials;
  rep.slack = config.slack;
  rep.epsilon_theoretical = theory.epsilon;
  rep.delta_theoretical = theory.delta;
  rep.theoretical_provenance = theory.provenance;
  rep.delta_overridden = config.delta.has_value();
  rep.delta_used = config.delta.value_or(theory.delta);
  rep.vacuous_delta = theory.vacuous() || rep.delta_used >= 1.0;

  const AttackResult attack = RunAttack(data, config, rep.delta_used);
  rep.fp_rate = attack.fp_rate;
  rep.fn_rate = attack.fn_rate;
  rep.epsilon_empirical = attack.epsilon;
  rep.best_threshold = attack.best_threshold;
  rep.rule = attack.rule;
  rep.clamped = attack.clamped;
  rep.unbounded = attack.unbounded;
  rep.verdict = Reconcile({attack.epsilon, attack.unbounded, rep.delta_used},
                          theory.epsilon, rep.delta_used, config.slack);
  return rep;
}

}  // namespace dcpriv
