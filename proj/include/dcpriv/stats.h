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

#ifndef DCPRIV_STATS_H_
#define DCPRIV_STATS_H_

#include <cstddef>
#include <span>

#include "dcpriv/dataset.h"

namespace dcpriv {

// Plugin (population-convention, divide-by-n) moments of one column.
struct MomentSummary {
  size_t n = 0;
  double mean = 0.0;
  double var = 0.0;       // (1/n) sum (x - mean)^2
  double abs3 = 0.0;      // (1/n) sum |x - mean|^3
  double cen4 = 0.0;      // (1/n) sum (x - mean)^4
  double sum_abs3 = 0.0;  // n * abs3
  double sum_cen4 = 0.0;  // n * cen4

  bool operator==(const MomentSummary&) const = default;
};

// Values are sorted before accumulation in long double, so the result is
// identical for every permutation of the input. Throws DomainError on empty
// input.
MomentSummary Summarize(std::span<const double> values);

// Sensitivity of the bounded sum under replacement neighbors.
struct Sensitivity {
  double delta_f = 1.0;
};

// delta_f = upper - lower. Throws DomainError unless lower < upper.
Sensitivity SensitivityOf(const Bounds& bounds);

}  // namespace dcpriv

#endif  // DCPRIV_STATS_H_
