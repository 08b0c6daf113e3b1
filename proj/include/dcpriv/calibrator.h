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

#ifndef DCPRIV_CALIBRATOR_H_
#define DCPRIV_CALIBRATOR_H_

#include <cstddef>
#include <string_view>

#include "dcpriv/stats.h"

namespace dcpriv {

// Where an (epsilon, delta) pair came from.
enum class Provenance {
  kDefaultThreat,      // attacker knows no record values
  kCompromisedThreat,  // attacker knows a fraction gamma of record values
  kEmpirical,          // measured from attack confusion rates
};

std::string_view ProvenanceName(Provenance p);

struct PrivacyParams {
  double epsilon = 0.0;  // may be +infinity
  double delta = 0.0;    // may exceed 1 (vacuous guarantee)
  Provenance provenance = Provenance::kDefaultThreat;

  bool vacuous() const { return delta > 1.0; }
};

// Number of uncompromised records n - floor(gamma * n). A 1e-9 guard absorbs
// products such as 0.29 * 100 = 28.999999999999996.
size_t UncompromisedCount(size_t n, double gamma);

struct ThreatModel {
  double gamma = 0.0;  // in [0, 1)
  size_t n = 0;
  Sensitivity sensitivity;
  // Moments of the uncompromised records. With gamma = 0 these are the
  // moments of the whole column.
  MomentSummary moments;

  size_t compromised() const { return n - UncompromisedCount(n, gamma); }
  size_t uncompromised() const { return UncompromisedCount(n, gamma); }

  // gamma in [0, 1) and at least two uncompromised records. Throws
  // DomainError.
  void Validate() const;
};

// ---------------------------------------------------------------------------
// Closed forms for the noiseless sum M(X) = sum_i X_i.

// Attacker knows nothing: eps = sqrt(delta_f^2 ln(n) / (n sigma2_bar)), where
// sigma2_bar is the per-record average variance. Requires n >= 2 and
// sigma2_bar > 0 (DegenerateDataError when zero).
double EpsilonDefaultThreat(Sensitivity sensitivity, size_t n, double sigma2_bar);

// delta = 1.12 sum_abs3 / (n sigma2_bar)^{3/2} (1 + e^eps) + 4 / (5 sqrt(n)).
double DeltaDefaultThreat(double epsilon, size_t n, double sigma2_bar,
                          double sum_abs3);

// Attacker knows floor(gamma n) records:
// eps = sqrt(delta_f^2 ln((1 - gamma) n) / sigma2_gamma), where sigma2_gamma is
// the total variance of the uncompromised records. (1 - gamma) n is taken as
// UncompromisedCount(n, gamma).
double EpsilonCompromisedThreat(Sensitivity sensitivity, size_t n, double gamma,
                                double sigma2_gamma);

// c(eps) = 2 (1 + e^eps) (2 / pi)^{1/4}.
double CompromisedDeltaConstant(double epsilon);

// delta = c(eps) sqrt(D^2 / sigma_gamma^3 M3 + D^{3/2} sqrt(26) / (sigma2_gamma
// sqrt(pi)) sqrt(M4)) + 4 / (5 sqrt((1 - gamma) n)).
//
// D is the sensitivity delta_f, and the unsubscripted sigma^2 of the second
// term is taken to be sigma2_gamma.
double DeltaCompromisedThreat(double epsilon, size_t n, double gamma,
                              Sensitivity sensitivity, double sigma2_gamma,
                              double m3, double m4);

// Calibrates one column. gamma == 0 uses the default threat model; otherwise
// the uncompromised subset is unknown, so its total moments are extrapolated
// from the per-record plugin moments: sigma2_gamma = k var, M3 = k abs3,
// M4 = k cen4 with k = UncompromisedCount(n, gamma).
PrivacyParams CalibrateColumn(const MomentSummary& moments,
                              Sensitivity sensitivity, double gamma);

// ---------------------------------------------------------------------------
// Confusion-rate side.

struct ConfusionRates {
  double fp = 0.0;
  double fn = 0.0;
  double delta = 0.0;

  // 0 <= fp, fn <= 1 and 0 <= delta < 1. Throws DomainError.
  void Validate() const;
};

struct RateEpsilon {
  double value = 0.0;      // >= 0, or +infinity when unbounded
  bool clamped = false;    // both log bounds were negative; value forced to 0
  bool unbounded = false;  // a zero rate with a positive numerator
};

// Smallest eps compatible with the observed rates:
// eps = max(ln((1 - delta - FP) / FN), ln((1 - delta - FN) / FP)).
// A log whose numerator is <= 0 imposes no constraint. Never throws for zero
// rates: FP = FN = 0 yields +infinity with the unbounded flag.
RateEpsilon EpsilonFromRates(const ConfusionRates& rates);

enum class Feasibility {
  kFeasible,
  kViolatesFpBound,  // FP + e^eps FN < 1 - delta
  kViolatesFnBound,  // FN + e^eps FP < 1 - delta
  kViolatesBoth,
};

std::string_view FeasibilityName(Feasibility f);

// Any test distinguishing neighbors of an (eps, delta)-DP mechanism satisfies
// FP + e^eps FN >= 1 - delta and FN + e^eps FP >= 1 - delta. Reports which of
// the two hold for the observed rates; EpsilonFromRates returns the smallest
// eps for which both hold. A relative slack of 1e-12 absorbs rounding at the
// exact boundary.
Feasibility CheckDpFeasible(const ConfusionRates& rates, double epsilon);

}  // namespace dcpriv

#endif  // DCPRIV_CALIBRATOR_H_
