"""Mazur-Tate elements, their norm relations, and Iwasawa-tower data.

The cyclotomic tower uses gamma = sigma_{1+p} as generator with
gamma -> 1 + X; a unit a mod p^n is split as a = omega(a) <a> with
<a> = (1+p)^e(a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .arith import ModRing, TruncPoly, euler_phi, hensel_unit_root, is_prime, teichmuller
from .eigenform import NormalizedEigenSymbol, period_integrals_mod
from .errors import (
    BadPrime,
    GcdViolation,
    InsufficientLevels,
    NotOrdinary,
    NotPrime,
    NotSupersingularZero,
    WeightParity,
)
from .groupring import GroupRingElement, projection, trace, unit_mask

__all__ = [
    "ThetaElement",
    "NormReport",
    "IwasawaBranchPoly",
    "StabilizedTheta",
    "IwasawaReading",
    "PollackLevel",
    "theta",
    "theta_values",
    "verify_norm_relation",
    "tower_coordinates",
    "theta_branch",
    "mu_criterion_sum",
    "stabilized_theta",
    "iwasawa_invariants",
    "pollack_degree",
    "pollack_check",
    "DEFAULT_PARITY",
    "mt_ideal_generators",
]


_THETA_KEEP = 10_000


@dataclass(frozen=True)
class ThetaElement:
    element: GroupRingElement
    form_id: str
    r: int

    @property
    def M(self) -> int:
        return self.element.M

    def coeff(self, a: int):
        return self.element.coeff(a)


def theta_values(nes: NormalizedEigenSymbol, M: int, r: int = 1) -> np.ndarray:
    """Array of [a/M]_{f,r} indexed by residue (zero at non-units)."""
    if M < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(M, nes.N) != 1:
        raise GcdViolation(f"gcd({M}, {nes.N}) != 1")
    key = ("theta", M, r)
    hit = nes._cache.get(key)
    if hit is not None:
        return hit.copy()
    mask = unit_mask(M)
    units = np.flatnonzero(mask).tolist()
    V = period_integrals_mod(nes, M, r, residues=units)
    vals = V[1] + V[-1]
    vals[~mask] = 0
    # keep only the most recent large array around
    for old in [k for k in nes._cache if k[0] == "theta" and k[1] > _THETA_KEEP]:
        del nes._cache[old]
    nes._cache[key] = vals
    return vals.copy()


def theta(nes: NormalizedEigenSymbol, M: int, r: int = 1) -> ThetaElement:
    """theta_{Q(zeta_M), r} = sum_a [a/M]_{f,r} sigma_a."""
    vals = theta_values(nes, M, r).astype(object)
    return ThetaElement(GroupRingElement(M, vals), nes.form_id, r)


@dataclass
class NormReport:
    m: int
    ell: int
    r: int
    lhs: GroupRingElement
    rhs: GroupRingElement

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def verify_norm_relation(nes: NormalizedEigenSymbol, m: int, ell: int, r: int = 1) -> NormReport:
    """Compare pi_{ml,m}(theta_{ml}) with the Hecke-side expression in theta_m."""
    if not is_prime(ell):
        raise NotPrime(f"{ell} is not prime")
    if math.gcd(m * ell, nes.N) != 1:
        raise GcdViolation(f"gcd({m * ell}, {nes.N}) != 1")
    k = nes.k
    a_ell = nes.hecke_eigenvalue(ell)
    lhs = projection(theta(nes, m * ell, r).element, m)
    tm = theta(nes, m, r).element
    if m % ell:
        frob = GroupRingElement.sigma(ell % m if m > 1 else 0, m)
        frob_inv = GroupRingElement.sigma(pow(ell, -1, m) if m > 1 else 0, m)
        rhs = tm.scale(a_ell) - (frob * tm).scale(ell ** (r - 1)) - (frob_inv * tm).scale(ell ** (k - 1 - r))
    else:
        lower = theta(nes, m // ell, r).element
        rhs = tm.scale(a_ell) - trace(lower, m).scale(ell ** (k - 2))
    return NormReport(m, ell, r, lhs, rhs)


# -- the cyclotomic p-power tower --------------------------------------------


def _check_tower_prime(nes: NormalizedEigenSymbol, p: int):
    if p < 3 or not is_prime(p):
        raise BadPrime(f"{p} is not an odd prime")
    if nes.N % p == 0:
        raise BadPrime(f"{p} divides the level {nes.N}")


@lru_cache(maxsize=32)
def tower_coordinates(p: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """For every residue a mod p^n: (a mod p, e(a)) with <a> = (1+p)^e(a); -1 at non-units."""
    q = p**n
    ring_n = ModRing(p, n)
    omega = [0] + [teichmuller(t, ring_n) for t in range(1, p)]
    log = {}
    x = 1
    for e in range(p ** (n - 1)):
        log[x] = e
        x = x * (1 + p) % q
    red = np.arange(q) % p
    expo = np.full(q, -1, dtype=np.int64)
    for a in range(q):
        t = a % p
        if t:
            expo[a] = log[a * pow(omega[t], -1, q) % q]
    return red, expo


@dataclass
class IwasawaBranchPoly:
    """omega^i part of a group-ring element at level p^n as a polynomial in X."""

    p: int
    n: int
    i: int
    poly: TruncPoly
    group_coeffs: list[int]

    @property
    def valuation(self) -> int | float:
        return self.poly.x_valuation_mod_p()


def _isotypic(vals: np.ndarray, p: int, n: int, i: int, ring: ModRing) -> tuple[TruncPoly, list[int]]:
    """sum_a vals[a] omega^i(a) (1+X)^{e(a)} in ring[X]/((1+X)^{p^(n-1)} - 1)."""
    q = ring.modulus
    red, expo = tower_coordinates(p, n)
    w = [0] + [pow(teichmuller(t, ring), i % (p - 1), q) for t in range(1, p)]
    c = [0] * p ** (n - 1)
    for a in np.flatnonzero(red != 0):
        v = vals[a]
        if v:
            c[expo[a]] = (c[expo[a]] + ring(v) * w[red[a]]) % q
    return TruncPoly.from_group_coeffs(ring, n - 1, c), c


def theta_branch(
    nes: NormalizedEigenSymbol, p: int, n: int, i: int = 0, ring: ModRing | None = None, r: int = 1
) -> IwasawaBranchPoly:
    """omega^i-component of theta_{Q(zeta_{p^n}), r} with sigma_{1+p} -> 1 + X."""
    _check_tower_prime(nes, p)
    if n < 1:
        raise ValueError("level n must be >= 1")
    ring = ring or ModRing(p, n + 2)
    vals = theta_values(nes, p**n, r)
    poly, c = _isotypic(vals, p, n, i, ring)
    return IwasawaBranchPoly(p, n, i % (p - 1), poly, c)


def mu_criterion_sum(nes: NormalizedEigenSymbol, p: int, n: int, i: int, b: int, r: int = 1) -> int:
    """sum_{a=1}^{p-1} [a(1+bp)/p^n]_{f,r} a^i mod p, with integer representatives a."""
    _check_tower_prime(nes, p)
    q = p**n
    vals = theta_values(nes, q, r)
    F = ModRing(p, 1)
    return sum(F(vals[a * (1 + b * p) % q]) * pow(a, i, p) for a in range(1, p)) % p


@dataclass
class StabilizedTheta:
    """vartheta at the layer Q(zeta_{p^(n+1)}) and its trace to Q_n."""

    p: int
    n: int
    alpha: int
    full: GroupRingElement
    poly: TruncPoly

    @property
    def ring(self) -> ModRing:
        return self.poly.ring


def stabilized_theta(
    nes: NormalizedEigenSymbol, p: int, n: int, ring: ModRing | None = None, r: int = 1
) -> StabilizedTheta:
    """alpha^{-(n+1)} (theta_{p^(n+1)} - p^(k-2) alpha^{-1} nu(theta_{p^n})) and its Q_n trace."""
    _check_tower_prime(nes, p)
    k = nes.k
    a_p = nes.hecke_eigenvalue(p)
    if a_p % p == 0:
        raise NotOrdinary(f"a_{p} = {a_p} is divisible by {p}")
    ring = ring or ModRing(p, n + 2)
    q = ring.modulus
    alpha = hensel_unit_root(a_p, ring, k)
    ainv = pow(alpha, -1, q)
    top = theta(nes, p ** (n + 1), r).element.with_ring(ring)
    low = trace(theta(nes, p**n, r).element.with_ring(ring), p ** (n + 1))
    c = p ** (k - 2) * ainv % q
    full = (top - low.scale(c)).scale(pow(ainv, n + 1, q))
    poly, _ = _isotypic(full.c, p, n + 1, 0, ring)
    return StabilizedTheta(p, n, alpha, full, poly)


# -- mod-p invariants -----------------------------------------------------------


@dataclass
class IwasawaReading:
    mu_zero: bool
    lam: int | None
    stable: bool
    valuations: list


def _poly_of(x) -> TruncPoly:
    return x if isinstance(x, TruncPoly) else x.poly


def iwasawa_invariants(seq: Sequence, shifts: Sequence[int] | None = None) -> IwasawaReading:
    """mu = 0 / lambda readings from consecutive levels (lowest level first).

    ``shifts[j]`` is subtracted from the j-th valuation before comparing;
    a reading is stable when all shifted, finite valuations agree and every
    level is nonzero mod p (or all vanish).
    """
    if len(seq) < 2:
        raise InsufficientLevels("need at least two consecutive levels")
    polys = [_poly_of(x) for x in seq]
    vals = [P.x_valuation_mod_p() for P in polys]
    shifts = list(shifts) if shifts is not None else [0] * len(vals)
    mu_zero = any(v != math.inf for v in vals)
    if not mu_zero:
        return IwasawaReading(False, None, True, vals)
    shifted = [v - s for v, s in zip(vals, shifts)]
    stable = all(v != math.inf for v in vals) and len(set(shifted)) == 1
    return IwasawaReading(True, int(shifted[-1]) if vals[-1] != math.inf else None, stable, vals)


DEFAULT_PARITY: Callable[[int], int] = lambda n: -1 if n % 2 == 0 else 1  # noqa: E731


def pollack_degree(p: int, n: int, sign: int) -> int:
    """deg omega~^sign_n: sum of phi(p^m) over 1 <= m <= n with m odd (sign -1) or even (+1)."""
    parity = 1 if sign < 0 else 0
    return sum(euler_phi(p**m) for m in range(1, n + 1) if m % 2 == parity)


@dataclass
class PollackLevel:
    n: int
    sign: int
    valuation: int | float
    q: int

    @property
    def lambda_candidate(self) -> int | None:
        return None if self.valuation == math.inf else int(self.valuation) - self.q

    @property
    def divis_ok(self) -> bool:
        return self.valuation >= self.q


def pollack_check(
    nes: NormalizedEigenSymbol,
    p: int,
    ns: Iterable[int],
    parity: Callable[[int], int] = DEFAULT_PARITY,
    r: int = 1,
) -> list[PollackLevel]:
    """Valuations of theta_n = Tr(theta_{p^(n+1)}) against the +- half-logarithm degrees."""
    _check_tower_prime(nes, p)
    a_p = nes.hecke_eigenvalue(p)
    if a_p != 0:
        raise NotSupersingularZero(f"a_{p} = {a_p} != 0")
    out = []
    F = ModRing(p, 1)
    for n in ns:
        poly = theta_branch(nes, p, n + 1, 0, F, r).poly
        s = parity(n)
        out.append(PollackLevel(n, s, poly.x_valuation_mod_p(), pollack_degree(p, n, s)))
    return out


def mt_ideal_generators(nes: NormalizedEigenSymbol, p: int, n: int, r: int | None = None) -> list[GroupRingElement]:
    """nu_{j,n}(theta_{Q(zeta_{p^j}), k/2}) for j = 0..n."""
    k = nes.k
    if k % 2:
        raise WeightParity(f"weight {k} is odd")
    _check_tower_prime(nes, p)
    r = k // 2 if r is None else r
    return [trace(theta(nes, p**j, r).element, p**n) for j in range(n + 1)]
