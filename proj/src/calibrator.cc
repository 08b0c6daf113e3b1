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

#include "dcpriv/calibrator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dcpriv/error.h"

namespace dcpriv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibilitySlack = 1e-12;

void RequirePositiveVariance(double variance, const char* what) {
  if (std::isnan(variance) || variance < 0.0) {
    throw DomainError(std::string(what) + " must be a non-negative number");
  }
  if (variance == 0.0) {
    throw DegenerateDataError(
        std::string(what) +
        " is zero: the data carry no inherent noise, so adversarial "
        "uncertainty gives no privacy guarantee");
  }
}

void RequireSensitivity(Sensitivity s) {
  if (!(s.delta_f > 0.0) || !std::isfinite(s.delta_f)) {
    throw DomainError("sensitivity must be positive and finite");
  }
}

void RequireGamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw DomainError("compromised fraction gamma must lie in [0, 1)");
  }
}

size_t RequireUncompromised(size_t n, double gamma) {
  RequireGamma(gamma);
  const size_t k = UncompromisedCount(n, gamma);
  if (k < 2) {
    throw DomainError("too few uncompromised records: need at least 2, have " +
                      std::to_string(k));
  }
  return k;
}

void RequireNonNegative(double v, const char* what) {
  if (!(v >= 0.0)) throw DomainError(std::string(what) + " must be >= 0");
}

}  // namespace

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kDefaultThreat:
      return "default_threat";
    case Provenance::kCompromisedThreat:
      return "compromised_threat";
    case Provenance::kEmpirical:
      return "empirical";
  }
  return "unknown";
}

size_t UncompromisedCount(size_t n, double gamma) {
  const double known = std::floor(gamma * static_cast<double>(n) + 1e-9);
  const size_t compromised = std::min(n, static_cast<size_t>(std::max(0.0, known)));
  return n - compromised;
}

void ThreatModel::Validate() const {
  RequireSensitivity(sensitivity);
  RequireUncompromised(n, gamma);
}

double EpsilonDefaultThreat(Sensitivity sensitivity, size_t n, double sigma2_bar) {
  RequireSensitivity(sensitivity);
  if (n < 2) throw DomainError("default threat model needs n >= 2");
  RequirePositiveVariance(sigma2_bar, "per-record variance");
  const double nd = static_cast<double>(n);
  return std::sqrt(sensitivity.delta_f * sensitivity.delta_f * std::log(nd) /
                   (nd * sigma2_bar));
}

double DeltaDefaultThreat(double epsilon, size_t n, double sigma2_bar,
                          double sum_abs3) {
  if (n < 2) throw DomainError("default threat model needs n >= 2");
  RequirePositiveVariance(sigma2_bar, "per-record variance");
  RequireNonNegative(sum_abs3, "third absolute moment sum");
  RequireNonNegative(epsilon, "epsilon");
  const double nd = static_cast<double>(n);
  const double total_var = nd * sigma2_bar;
  return 1.12 * sum_abs3 / std::pow(total_var, 1.5) * (1.0 + std::exp(epsilon)) +
         4.0 / (5.0 * std::sqrt(nd));
}

double EpsilonCompromisedThreat(Sensitivity sensitivity, size_t n, double gamma,
                                double sigma2_gamma) {
  RequireSensitivity(sensitivity);
  const size_t k = RequireUncompromised(n, gamma);
  RequirePositiveVariance(sigma2_gamma, "uncompromised-subset variance");
  return std::sqrt(sensitivity.delta_f * sensitivity.delta_f *
                   std::log(static_cast<double>(k)) / sigma2_gamma);
}

double CompromisedDeltaConstant(double epsilon) {
  return 2.0 * (1.0 + std::exp(epsilon)) *
         std::pow(2.0 / std::numbers::pi, 0.25);
}

double DeltaCompromisedThreat(double epsilon, size_t n, double gamma,
                              Sensitivity sensitivity, double sigma2_gamma,
                              double m3, double m4) {
  RequireSensitivity(sensitivity);
  const size_t k = RequireUncompromised(n, gamma);
  RequirePositiveVariance(sigma2_gamma, "uncompromised-subset variance");
  RequireNonNegative(m3, "third absolute moment sum");
  RequireNonNegative(m4, "fourth central moment sum");
  RequireNonNegative(epsilon, "epsilon");
  const double d = sensitivity.delta_f;
  const double sigma3 = std::pow(sigma2_gamma, 1.5);
  const double inner =
      d * d / sigma3 * m3 +
      std::pow(d, 1.5) * std::sqrt(26.0) /
          (sigma2_gamma * std::sqrt(std::numbers::pi)) * std::sqrt(m4);
  return CompromisedDeltaConstant(epsilon) * std::sqrt(inner) +
         4.0 / (5.0 * std::sqrt(static_cast<double>(k)));
}

PrivacyParams CalibrateColumn(const MomentSummary& moments,
                              Sensitivity sensitivity, double gamma) {
  RequireGamma(gamma);
  PrivacyParams p;
  if (gamma == 0.0) {
    p.provenance = Provenance::kDefaultThreat;
    p.epsilon = EpsilonDefaultThreat(sensitivity, moments.n, moments.var);
    p.delta = DeltaDefaultThreat(p.epsilon, moments.n, moments.var, moments.sum_abs3);
    return p;
  }
  ThreatModel model{gamma, moments.n, sensitivity, moments};
  model.Validate();
  const double k = static_cast<double>(model.uncompromised());
  const double sigma2_gamma = k * moments.var;
  p.provenance = Provenance::kCompromisedThreat;
  p.epsilon = EpsilonCompromisedThreat(sensitivity, moments.n, gamma, sigma2_gamma);
  p.delta = DeltaCompromisedThreat(p.epsilon, moments.n, gamma, sensitivity,
                                   sigma2_gamma, k * moments.abs3, k * moments.cen4);
  return p;
}

void ConfusionRates::Validate() const {
  if (!(fp >= 0.0 && fp <= 1.0)) throw DomainError("FP rate must lie in [0, 1]");
  if (!(fn >= 0.0 && fn <= 1.0)) throw DomainError("FN rate must lie in [0, 1]");
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("delta must lie in [0, 1)");
}

RateEpsilon EpsilonFromRates(const ConfusionRates& rates) {
  rates.Validate();
  // ln(num / den); a non-positive numerator gives no constraint.
  auto bound = [](double num, double den) {
    if (num <= 0.0) return -kInf;
    if (den == 0.0) return kInf;
    return std::log(num / den);
  };
  const double a = bound(1.0 - rates.delta - rates.fp, rates.fn);
  const double b = bound(1.0 - rates.delta - rates.fn, rates.fp);
  const double best = std::max(a, b);

  RateEpsilon out;
  if (best == kInf) {
    out.value = kInf;
    out.unbounded = true;
  } else if (best < 0.0) {
    out.value = 0.0;
    out.clamped = true;
  } else {
    out.value = best;
  }
  return out;
}

std::string_view FeasibilityName(Feasibility f) {
  switch (f) {
    case Feasibility::kFeasible:
      return "feasible";
    case Feasibility::kViolatesFpBound:
      return "violates_fp_bound";
    case Feasibility::kViolatesFnBound:
      return "violates_fn_bound";
    case Feasibility::kViolatesBoth:
      return "violates_both";
  }
  return "unknown";
}

Feasibility CheckDpFeasible(const ConfusionRates& rates, double epsilon) {
  rates.Validate();
  RequireNonNegative(epsilon, "epsilon");
  const double scale = std::exp(epsilon);
  const double rhs = 1.0 - rates.delta;
  auto holds = [&](double lhs) {
    return lhs >= rhs - kFeasibilitySlack * std::max(1.0, std::fabs(lhs));
  };
  // inf * 0 is NaN; a zero rate contributes nothing at any epsilon.
  auto scaled = [&](double rate) { return rate == 0.0 ? 0.0 : scale * rate; };
  const bool fp_ok = holds(rates.fp + scaled(rates.fn));
  const bool fn_ok = holds(rates.fn + scaled(rates.fp));
  if (fp_ok && fn_ok) return Feasibility::kFeasible;
  if (!fp_ok && !fn_ok) return Feasibility::kViolatesBoth;
  return fp_ok ? Feasibility::kViolatesFnBound : Feasibility::kViolatesFpBound;
}

}  // namespace dcpriv
