"""Floating-point cross-checks: real periods and L(E, 1)."""

import mpmath

from iwtheta import CurveModel, period_integral, resolve
from iwtheta.analytic import lvalue_rank0, real_period

curves = [
    CurveModel((0, -1, 1, -10, -20), 11, "11a1"),
    CurveModel((0, 0, 1, -1, 0), 37, "37a1"),
    CurveModel((1, 0, 1, 4, -6), 14, "14a1"),
]

mpmath.mp.dps = 30
for E in curves:
    omega = real_period(E)
    L = lvalue_rank0(E)
    exact = period_integral(resolve(E), 1, 0, 1, 1)
    ratio = L.value / omega
    print(f"{E.label:6s} Omega={mpmath.nstr(omega, 15)}  L(E,1)={mpmath.nstr(L.value, 15)}  "
          f"eps={L.epsilon:+d}  L/Omega={mpmath.nstr(ratio, 10)}  [0/1]^+={exact}")
