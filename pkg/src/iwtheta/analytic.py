"""Floating-point cross-checks: the real period and L(E, 1).

Everything runs in mpmath at a fixed decimal precision so results do not
depend on hardware floats.  Nothing here feeds back into exact computations.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .eigenform import CurveModel, count_points
from .errors import PrecisionUnreachable, SingularCurve

__all__ = ["FloatContext", "LValue", "real_period", "cubic_roots", "dirichlet_coefficients", "lvalue_rank0"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FloatContext:
    digits: int = 50
    max_terms: int | None = None

    def __post_init__(self):
        if self.digits < 30:
            raise ValueError("working precision must be at least 30 digits")

    @property
    def tolerance(self):
        return mpmath.mpf(10) ** (-(self.digits - 5))


def cubic_roots(curve: CurveModel, ctx: FloatContext = FloatContext()):
    """Roots of 4x^3 + b2 x^2 + 2 b4 x + b6, real ones first in decreasing order."""
    b2, b4, b6, _ = curve.b_invariants
    with mpmath.workdps(ctx.digits + 10):
        roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=2 * ctx.digits)
    real = sorted((mpmath.re(z) for z in roots if abs(mpmath.im(z)) < ctx.tolerance), reverse=True)
    cplx = [z for z in roots if abs(mpmath.im(z)) >= ctx.tolerance]
    return real, cplx


def real_period(curve: CurveModel, ctx: FloatContext = FloatContext()) -> mpmath.mpf:
    """Integral of |dx / (2y + a1 x + a3)| over E(R), by the AGM."""
    if curve.discriminant == 0:
        raise SingularCurve("zero discriminant")
    real, cplx = cubic_roots(curve, ctx)
    with mpmath.workdps(ctx.digits):
        if len(real) == 3:
            e1, e2, e3 = real
            omega = mpmath.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
            return 2 * omega
        e1 = real[0]
        z = cplx[0]
        # sqrt(e1 - z) and sqrt(e1 - conj z) are conjugate, so the AGM is real
        omega = mpmath.pi / mpmath.agm(mpmath.sqrt(e1 - z), mpmath.sqrt(e1 - mpmath.conj(z)))
        return mpmath.re(omega)


def dirichlet_coefficients(curve: CurveModel, n_max: int) -> np.ndarray:
    """a_1..a_{n_max} (index 0 unused) from point counts and the Hecke recursion."""
    a = np.zeros(n_max + 1, dtype=object)
    if n_max >= 1:
        a[1] = 1
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for q in range(2, n_max + 1):
        if spf[q] == 0:
            spf[q::q] = np.where(spf[q::q] == 0, q, spf[q::q])
    for n in range(2, n_max + 1):
        q = int(spf[n])
        m, e = n, 0
        while m % q == 0:
            m //= q
            e += 1
        if m > 1:
            a[n] = a[q**e] * a[m]
            continue
        # n = q^e
        if e == 1:
            a[n] = q + 1 - count_points(curve.ainvs, q)
        elif curve.N % q == 0:
            a[n] = a[q] ** e
        else:
            a[n] = a[q] * a[n // q] - q * a[n // (q * q)]
    return a


@dataclass
class LValue:
    value: mpmath.mpf
    epsilon: int
    error: mpmath.mpf
    terms: int


def _series(a, N: int, t, terms: int):
    c = 2 * mpmath.pi / mpmath.sqrt(N)
    s = mpmath.mpf(0)
    for n in range(1, terms + 1):
        if a[n]:
            s += mpmath.mpf(int(a[n])) / n * mpmath.exp(-c * n * t)
    return s


def lvalue_rank0(curve: CurveModel, N: int | None = None, ctx: FloatContext = FloatContext()) -> LValue:
    """L(E, 1) and the root number from the functional-equation series at t = 1 and t = 6/5.

    For every t > 0, L(E,1) = sum a_n/n (exp(-2 pi n t/sqrt N) + eps exp(-2 pi n/(t sqrt N))).
    """
    N = curve.N if N is None else N
    t_small = mpmath.mpf(5) / 6
    with mpmath.workdps(ctx.digits + 10):
        c = 2 * mpmath.pi / mpmath.sqrt(N) * t_small
        need = int(mpmath.ceil((ctx.digits + 5) * mpmath.log(10) / c)) + 1
        terms = need if ctx.max_terms is None else ctx.max_terms
        tail = mpmath.exp(-c * (terms + 1)) / (1 - mpmath.exp(-c))
        if tail > ctx.tolerance:
            raise PrecisionUnreachable(f"{terms} terms leave a tail of {mpmath.nstr(tail, 5)}")
        a = dirichlet_coefficients(curve, terms)
        t1, t2 = mpmath.mpf(1), mpmath.mpf(6) / 5
        A1, B1 = _series(a, N, t1, terms), _series(a, N, 1 / t1, terms)
        A2, B2 = _series(a, N, t2, terms), _series(a, N, 1 / t2, terms)
        eps_raw = (A1 - A2) / (B2 - B1)
        eps = 1 if eps_raw > 0 else -1
        if abs(eps_raw - eps) > mpmath.mpf(10) ** (-(ctx.digits // 3)):
            raise PrecisionUnreachable(f"root number estimate {mpmath.nstr(eps_raw, 10)} is not +-1")
        value = +(A1 + eps * B1)
        err = 4 * tail
    log.info("Fricke-eigenvalue cross-check skipped: no exact Fricke action on the symbol space")
    return LValue(value, eps, err, terms)
