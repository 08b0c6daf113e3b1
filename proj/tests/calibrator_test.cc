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

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "dcpriv/error.h"
#include "dcpriv/rng.h"
#include "golden_values.h"

namespace dcpriv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

TEST(DefaultThreatTest, GoldenEpsilons) {
  EXPECT_LT(Rel(EpsilonDefaultThreat({1.0}, 10000, 1.0), golden::kEpsSumUnitVar), 1e-14);
  EXPECT_LT(Rel(EpsilonDefaultThreat({1.0}, 10000, 1.0 / 12.0), golden::kEpsSumUniform),
            1e-14);
  EXPECT_EQ(EpsilonDefaultThreat({2.0}, 10000, 1.0),
            2.0 * EpsilonDefaultThreat({1.0}, 10000, 1.0));
}

TEST(DefaultThreatTest, GoldenDelta) {
  const double d = DeltaDefaultThreat(golden::kEpsSumUniform, 10000, 1.0 / 12.0, 312.5);
  EXPECT_LT(Rel(d, golden::kDeltaSumUniform), 1e-13);
  // The rounded epsilon used as input in the worked example lands within
  // the same 1e-4 band.
  EXPECT_NEAR(DeltaDefaultThreat(0.105128, 10000, 1.0 / 12.0, 312.5), 0.03871, 1e-4);
}

TEST(DefaultThreatTest, DeltaFloorTerm) {
  EXPECT_DOUBLE_EQ(DeltaDefaultThreat(0.0, 10000, 1.0, 0.0), 0.008);
  for (double eps : {0.0, 0.3, 4.0}) {
    EXPECT_DOUBLE_EQ(DeltaDefaultThreat(eps, 25, 2.0, 0.0), 0.16);
  }
}

TEST(DefaultThreatTest, Errors) {
  EXPECT_THROW(EpsilonDefaultThreat({1.0}, 100, 0.0), DegenerateDataError);
  EXPECT_THROW(EpsilonDefaultThreat({1.0}, 1, 1.0), DomainError);
  EXPECT_THROW(EpsilonDefaultThreat({0.0}, 100, 1.0), DomainError);
  EXPECT_THROW(EpsilonDefaultThreat({1.0}, 100, -1.0), DomainError);
  EXPECT_THROW(DeltaDefaultThreat(0.1, 100, 0.0, 1.0), DegenerateDataError);
  EXPECT_THROW(DeltaDefaultThreat(0.1, 100, 1.0, -1.0), DomainError);
  EXPECT_THROW(DeltaDefaultThreat(-0.1, 100, 1.0, 1.0), DomainError);
}

TEST(CompromisedThreatTest, GoldenValues) {
  EXPECT_LT(Rel(EpsilonCompromisedThreat({1.0}, 10000, 0.19, 8100.0),
                golden::kEpsCompromised019),
            1e-14);
  EXPECT_LT(Rel(CompromisedDeltaConstant(0.0), golden::kCZero), 1e-15);
  const double d = DeltaCompromisedThreat(golden::kEpsSumUniform, 10000, 0.0, {1.0},
                                          10000.0 / 12.0, 312.5, 125.0);
  EXPECT_LT(Rel(d, golden::kDeltaCompromisedUniform), 1e-13);
  EXPECT_GT(d, 0.0);
  EXPECT_DOUBLE_EQ(DeltaCompromisedThreat(0.2, 10000, 0.0, {1.0}, 50.0, 0.0, 0.0), 0.008);
}

TEST(CompromisedThreatTest, LinearInSensitivity) {
  const double one = EpsilonCompromisedThreat({1.0}, 5000, 0.3, 700.0);
  const double three = EpsilonCompromisedThreat({3.0}, 5000, 0.3, 700.0);
  EXPECT_NEAR(three / one, 3.0, 1e-15);
}

TEST(CompromisedThreatTest, Errors) {
  EXPECT_THROW(EpsilonCompromisedThreat({1.0}, 100, 0.1, 0.0), DegenerateDataError);
  EXPECT_THROW(EpsilonCompromisedThreat({1.0}, 10, 0.9, 1.0), DomainError);
  EXPECT_THROW(EpsilonCompromisedThreat({1.0}, 10, 1.0, 1.0), DomainError);
  EXPECT_THROW(EpsilonCompromisedThreat({1.0}, 10, -0.1, 1.0), DomainError);
  EXPECT_NO_THROW(EpsilonCompromisedThreat({1.0}, 10, 0.85, 1.0));  // 2 remain
}

TEST(UncompromisedCountTest, FloorsCompromisedShare) {
  EXPECT_EQ(UncompromisedCount(10000, 0.19), 8100u);
  EXPECT_EQ(UncompromisedCount(100, 0.29), 71u);  // 0.29 * 100 rounds below 29
  EXPECT_EQ(UncompromisedCount(10, 0.15), 9u);
  EXPECT_EQ(UncompromisedCount(10, 0.0), 10u);
}

TEST(CalibrateColumnTest, SelectsThreatModel) {
  MomentSummary m;
  m.n = 10000;
  m.var = 1.0 / 12.0;
  m.abs3 = 1.0 / 32.0;
  m.cen4 = 1.0 / 80.0;
  m.sum_abs3 = 312.5;
  m.sum_cen4 = 125.0;
  const PrivacyParams p0 = CalibrateColumn(m, {1.0}, 0.0);
  EXPECT_EQ(p0.provenance, Provenance::kDefaultThreat);
  EXPECT_LT(Rel(p0.epsilon, golden::kEpsSumUniform), 1e-14);
  EXPECT_LT(Rel(p0.delta, golden::kDeltaSumUniform), 1e-13);
  EXPECT_FALSE(p0.vacuous());

  const PrivacyParams p1 = CalibrateColumn(m, {1.0}, 0.19);
  EXPECT_EQ(p1.provenance, Provenance::kCompromisedThreat);
  EXPECT_DOUBLE_EQ(p1.epsilon, EpsilonCompromisedThreat({1.0}, 10000, 0.19, 8100.0 / 12.0));
  EXPECT_GT(p1.epsilon, p0.epsilon);
}

TEST(CalibratorPropertyTest, CompromisedAtZeroGammaReducesToDefault) {
  for (uint64_t s = 0; s < 200; ++s) {
    CounterRng rng({s, 11});
    const size_t n = 3 + rng.NextBelow(100000);
    const double df = 0.01 + 10 * rng.NextUniform();
    double total = 0.0;
    for (size_t i = 0; i < std::min<size_t>(n, 64); ++i) total += 0.01 + rng.NextUniform();
    const double sigma2_bar = total / std::min<size_t>(n, 64);
    const double e1 = EpsilonDefaultThreat({df}, n, sigma2_bar);
    const double e2 = EpsilonCompromisedThreat({df}, n, 0.0, n * sigma2_bar);
    EXPECT_LT(Rel(e2, e1), 1e-12);
    EXPECT_LT(Rel(EpsilonDefaultThreat({2.5 * df}, n, sigma2_bar), 2.5 * e1), 1e-12);
  }
}

TEST(CalibratorPropertyTest, Monotonicity) {
  double prev = 0.0;
  for (size_t n = 3; n < 2000; n += 7) {
    const double e = EpsilonDefaultThreat({1.0}, n, 0.5);
    if (n > 3) EXPECT_LT(e, prev);
    prev = e;
  }
  prev = kInf;
  for (double v = 0.01; v < 5; v *= 1.3) {
    const double e = EpsilonDefaultThreat({1.0}, 500, v);
    EXPECT_LT(e, prev);
    prev = e;
  }
  // Homogeneous variance: sigma_gamma^2 = k * var, so eps^2 = ln(k) / (k var).
  prev = 0.0;
  for (double g = 0.0; g < 0.99; g += 0.01) {
    const size_t n = 1000;
    const size_t k = UncompromisedCount(n, g);
    if (static_cast<double>(k) <= std::exp(1.0)) break;
    const double e = EpsilonCompromisedThreat({1.0}, n, g, k * 0.2);
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(CalibratorPropertyTest, DeltaIncreasingInMomentsAndFloored) {
  double prev = 0.0;
  for (double s3 = 0.0; s3 < 1000; s3 += 37.0) {
    const double d = DeltaDefaultThreat(0.3, 400, 0.5, s3);
    EXPECT_GE(d, 4.0 / (5.0 * 20.0));
    if (s3 > 0) EXPECT_GT(d, prev);
    prev = d;
  }
  prev = 0.0;
  for (double m = 0.0; m < 500; m += 13.0) {
    const double d3 = DeltaCompromisedThreat(0.3, 400, 0.1, {1.0}, 40.0, m, 10.0);
    const double d4 = DeltaCompromisedThreat(0.3, 400, 0.1, {1.0}, 40.0, 10.0, m);
    EXPECT_GE(d3, 4.0 / (5.0 * std::sqrt(360.0)));
    if (m > 0) {
      EXPECT_GT(d3, prev);
      EXPECT_GT(d4, DeltaCompromisedThreat(0.3, 400, 0.1, {1.0}, 40.0, 10.0, m - 13.0));
    }
    prev = d3;
  }
}

TEST(EpsilonFromRatesTest, Examples) {
  const RateEpsilon a = EpsilonFromRates({0.05, 0.05, 0.01});
  EXPECT_NEAR(a.value, golden::kEpsFromRates005, 1e-14);
  EXPECT_FALSE(a.clamped || a.unbounded);

  const RateEpsilon b = EpsilonFromRates({0.25, 0.25, 0.5});
  EXPECT_EQ(b.value, 0.0);
  EXPECT_FALSE(b.clamped);

  const RateEpsilon c = EpsilonFromRates({0.5, 0.5, 0.2});
  EXPECT_EQ(c.value, 0.0);
  EXPECT_TRUE(c.clamped);
}

TEST(EpsilonFromRatesTest, ZeroRates) {
  const RateEpsilon perfect = EpsilonFromRates({0.0, 0.0, 0.1});
  EXPECT_EQ(perfect.value, kInf);
  EXPECT_TRUE(perfect.unbounded);
  const RateEpsilon fn_zero = EpsilonFromRates({0.2, 0.0, 0.1});
  EXPECT_TRUE(fn_zero.unbounded);
  // Zero FN but nothing left in the numerator: the other bound decides.
  const RateEpsilon degenerate = EpsilonFromRates({0.95, 0.0, 0.1});
  EXPECT_FALSE(degenerate.unbounded);
  EXPECT_EQ(degenerate.value, 0.0);
  EXPECT_TRUE(degenerate.clamped);
}

TEST(EpsilonFromRatesTest, InvalidRatesThrow) {
  EXPECT_THROW(EpsilonFromRates({-0.1, 0.1, 0.1}), DomainError);
  EXPECT_THROW(EpsilonFromRates({0.1, 1.1, 0.1}), DomainError);
  EXPECT_THROW(EpsilonFromRates({0.1, 0.1, 1.0}), DomainError);
}

TEST(EpsilonFromRatesTest, SymmetricInFpFn) {
  for (uint64_t s = 0; s < 1000; ++s) {
    CounterRng rng({s, 5});
    const ConfusionRates r{rng.NextUniform(), rng.NextUniform(), 0.5 * rng.NextUniform()};
    const RateEpsilon a = EpsilonFromRates(r);
    const RateEpsilon b = EpsilonFromRates({r.fn, r.fp, r.delta});
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.clamped, b.clamped);
  }
}

TEST(CheckDpFeasibleTest, Examples) {
  // 0.3 + e^0.5 * 0.3 = 0.79462 falls short of 0.9: an attack this accurate
  // rules out eps = 0.5.
  EXPECT_EQ(CheckDpFeasible({0.3, 0.3, 0.1}, 0.5), Feasibility::kViolatesBoth);
  EXPECT_EQ(CheckDpFeasible({0.3, 0.3, 0.1}, 0.7), Feasibility::kFeasible);
  // eps = 0 reduces both bounds to FP + FN >= 1 - delta.
  EXPECT_EQ(CheckDpFeasible({0.6, 0.6, 0.0}, 0.0), Feasibility::kFeasible);
  EXPECT_EQ(CheckDpFeasible({0.4, 0.4, 0.0}, 0.0), Feasibility::kViolatesBoth);
  // A perfect attack is incompatible with every finite eps when delta < 1.
  for (double eps : {0.0, 1.0, 30.0}) {
    EXPECT_EQ(CheckDpFeasible({0.0, 0.0, 0.9}, eps), Feasibility::kViolatesBoth);
  }
  // 0.1 + e * 0.3 = 0.915 >= 0.9 holds; 0.3 + e * 0.1 = 0.572 does not.
  EXPECT_EQ(CheckDpFeasible({0.1, 0.3, 0.1}, 1.0), Feasibility::kViolatesFnBound);
  EXPECT_EQ(CheckDpFeasible({0.3, 0.1, 0.1}, 1.0), Feasibility::kViolatesFpBound);
}

TEST(CheckDpFeasibleTest, ConsistentWithRateEpsilon) {
  int checked = 0;
  for (uint64_t s = 0; s < 5000; ++s) {
    CounterRng rng({s, 17});
    const ConfusionRates r{0.5 * rng.NextUniform(), 0.5 * rng.NextUniform(),
                           0.3 * rng.NextUniform()};
    const RateEpsilon e = EpsilonFromRates(r);
    if (e.clamped || e.unbounded) continue;
    ++checked;
    EXPECT_EQ(CheckDpFeasible(r, e.value), Feasibility::kFeasible);
    if (e.value > 1e-9) {
      EXPECT_NE(CheckDpFeasible(r, e.value - 1e-9), Feasibility::kFeasible);
    }
  }
  EXPECT_GT(checked, 1000);
}

}  // namespace
}  // namespace dcpriv
