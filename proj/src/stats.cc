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

#include "dcpriv/stats.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dcpriv/error.h"

namespace dcpriv {

MomentSummary Summarize(std::span<const double> values) {
  if (values.empty()) throw DomainError("cannot summarize an empty column");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  MomentSummary m;
  m.n = sorted.size();
  if (sorted.front() == sorted.back()) {
    m.mean = sorted.front();
    return m;
  }

  const long double n = static_cast<long double>(sorted.size());
  long double sum = 0.0L;
  for (double v : sorted) sum += v;
  const long double mean = sum / n;

  long double s2 = 0.0L, s3 = 0.0L, s4 = 0.0L;
  for (double v : sorted) {
    const long double d = static_cast<long double>(v) - mean;
    const long double d2 = d * d;
    s2 += d2;
    s3 += d2 * std::fabs(d);
    s4 += d2 * d2;
  }

  m.mean = static_cast<double>(mean);
  m.var = static_cast<double>(s2 / n);
  m.abs3 = static_cast<double>(s3 / n);
  m.cen4 = static_cast<double>(s4 / n);
  m.sum_abs3 = static_cast<double>(s3);
  m.sum_cen4 = static_cast<double>(s4);
  return m;
}

Sensitivity SensitivityOf(const Bounds& bounds) {
  if (!(bounds.lower < bounds.upper)) {
    throw DomainError("sensitivity requires lower < upper bound");
  }
  return Sensitivity{bounds.upper - bounds.lower};
}

}  // namespace dcpriv
