#!/usr/bin/env python3
# Copyright 2026 The dcpriv Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Extended-precision oracle for the closed-form calibration constants.

Evaluates every golden value with mpmath at 50 digits, independent of the
C++ code, and checks the frozen constants in tests/golden_values.h against
it. Exits non-zero on any mismatch.
"""

import re
import sys
from pathlib import Path

from mpmath import mp, mpf, sqrt, log, exp, pi

mp.dps = 50


def eps_sum(delta_f, n, sigma2):
    return sqrt(delta_f**2 * log(n) / (n * sigma2))


def delta_sum(eps, n, sigma2, sum_abs3):
    return mpf("1.12") * sum_abs3 / (n * sigma2) ** mpf(1.5) * (1 + exp(eps)) + 4 / (5 * sqrt(n))


def eps_compromised(delta_f, uncompromised, sigma2_gamma):
    return sqrt(delta_f**2 * log(uncompromised) / sigma2_gamma)


def c_const(eps):
    return 2 * (1 + exp(eps)) * (2 / pi) ** mpf(0.25)


def delta_compromised(eps, uncompromised, delta_f, sigma2_gamma, m3, m4):
    sigma_gamma = sqrt(sigma2_gamma)
    inner = delta_f**2 / sigma_gamma**3 * m3 + delta_f ** mpf(1.5) * sqrt(26) / (sigma2_gamma * sqrt(pi)) * sqrt(m4)
    return c_const(eps) * sqrt(inner) + 4 / (5 * sqrt(uncompromised))


def compute():
    n = mpf(10000)
    uniform_var = mpf(1) / 12
    uniform_abs3 = mpf(1) / 32  # E|U - 1/2|^3
    uniform_cen4 = mpf(1) / 80  # E(U - 1/2)^4
    out = {}
    out["kEpsSumUnitVar"] = eps_sum(1, n, 1)
    eps_u = eps_sum(1, n, uniform_var)
    out["kEpsSumUniform"] = eps_u
    out["kDeltaSumUniform"] = delta_sum(eps_u, n, uniform_var, n * uniform_abs3)
    out["kEpsCompromised019"] = eps_compromised(1, mpf(8100), mpf(8100))
    out["kDeltaCompromisedUniform"] = delta_compromised(
        eps_u, n, 1, n * uniform_var, n * uniform_abs3, n * uniform_cen4)
    out["kCZero"] = c_const(0)
    out["kEpsFromRates005"] = log(mpf("0.94") / mpf("0.05"))
    return out


def main():
    values = compute()
    for k, v in values.items():
        print(f"{k} = {mp.nstr(v, 20)}")
    header = Path(__file__).resolve().parent.parent / "golden_values.h"
    if not header.exists():
        return 0
    text = header.read_text()
    bad = 0
    for k, v in values.items():
        m = re.search(rf"{k}\s*=\s*([-+0-9.eE]+)", text)
        if m is None:
            print(f"missing constant {k} in {header}")
            bad += 1
            continue
        frozen = mpf(m.group(1))
        if abs(frozen - v) > mpf("1e-15") * max(1, abs(v)):
            print(f"{k}: frozen {m.group(1)} != oracle {mp.nstr(v, 20)}")
            bad += 1
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
