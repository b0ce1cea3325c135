"""Group rings R[(Z/M)^x] with R = Z or Z/p^k.

Elements are dense numpy arrays of length M indexed by residue; entries at
non-units are kept at zero.  Exact integer coefficients use ``dtype=object``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .arith import LogTable, ModRing, TruncPoly, is_prime, is_squarefree, multiplicative_order
from .errors import BadModulus, NotDivisor, NotPrime, NotPrimitiveRoot, NotSquareFree

__all__ = [
    "GroupRingElement",
    "KolyvaginQuotient",
    "projection",
    "trace",
    "teichmuller_component",
    "kolyvagin_expand",
    "augmentation_order",
    "unit_mask",
]


def _mod_p_array(c: np.ndarray, p: int) -> np.ndarray:
    if c.dtype != object:
        return c.astype(np.int64) % p
    F = ModRing(p, 1)
    return np.array([F(v) for v in c], dtype=np.int64)


def unit_mask(M: int) -> np.ndarray:
    if M == 1:
        return np.ones(1, dtype=bool)
    return np.gcd(np.arange(M), M) == 1


def _dtype(ring: ModRing | None):
    if ring is not None and ring.modulus < 2**31:
        return np.int64
    return object


class GroupRingElement:
    """sum_a c_a sigma_a over the units a mod ``M``."""

    __slots__ = ("M", "ring", "c")

    def __init__(self, M: int, coeffs: Mapping[int, object] | np.ndarray | None = None, ring: ModRing | None = None):
        if M < 1:
            raise ValueError("modulus must be positive")
        self.M, self.ring = M, ring
        mask = unit_mask(M)
        if isinstance(coeffs, np.ndarray):
            if coeffs.shape != (M,):
                raise ValueError("coefficient array must have length M")
            c = coeffs.astype(object) if _dtype(ring) is object else coeffs.astype(np.int64)
        else:
            c = np.zeros(M, dtype=_dtype(ring))
            for a, v in (coeffs or {}).items():
                a %= M
                if not mask[a]:
                    raise ValueError(f"{a} is not a unit mod {M}")
                c[a] += v if ring is None else ring(v)
        if ring is not None:
            c = c % ring.modulus
        c[~mask] = 0
        self.c = c

    @classmethod
    def sigma(cls, a: int, M: int, ring: ModRing | None = None) -> "GroupRingElement":
        return cls(M, {a: 1}, ring)

    def coeff(self, a: int):
        return self.c[a % self.M]

    def items(self) -> list[tuple[int, object]]:
        return [(int(a), self.c[a]) for a in np.flatnonzero(self.c != 0)]

    def with_ring(self, ring: ModRing) -> "GroupRingElement":
        c = self.c
        if c.dtype == object:
            c = np.array([ring(x) for x in c], dtype=object)
        return GroupRingElement(self.M, c, ring)

    def _like(self, c) -> "GroupRingElement":
        return GroupRingElement(self.M, c, self.ring)

    def _check(self, other: "GroupRingElement"):
        if self.M != other.M or self.ring != other.ring:
            raise BadModulus("group-ring operands differ in modulus or coefficients")

    def __add__(self, other):
        self._check(other)
        return self._like(self.c + other.c)

    def __sub__(self, other):
        self._check(other)
        return self._like(self.c - other.c)

    def __neg__(self):
        return self._like(-self.c)

    def scale(self, s) -> "GroupRingElement":
        return self._like(self.c * s)

    def __mul__(self, other):
        if not isinstance(other, GroupRingElement):
            return self.scale(other)
        self._check(other)
        M = self.M
        units = np.flatnonzero(other.c != 0)
        vals = other.c[units]
        out = np.zeros(M, dtype=self.c.dtype)
        q = None if self.ring is None else self.ring.modulus
        for a in np.flatnonzero(self.c != 0):
            prod = self.c[a] * vals
            if q is not None:
                prod %= q
            np.add.at(out, (int(a) * units) % M, prod)
            if q is not None:
                out %= q
        return self._like(out)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupRingElement)
            and self.M == other.M
            and self.ring == other.ring
            and bool(np.all(self.c == other.c))
        )

    def __repr__(self):
        terms = " + ".join(f"{v}*s{a}" for a, v in self.items()) or "0"
        return f"GroupRingElement(M={self.M}: {terms})"


def projection(x: GroupRingElement, n: int) -> GroupRingElement:
    """pi_{M,n}: sum each fibre of (Z/M)^x -> (Z/n)^x."""
    if n < 1 or x.M % n:
        raise NotDivisor(f"{n} does not divide {x.M}")
    return GroupRingElement(n, x.c.reshape(x.M // n, n).sum(axis=0), x.ring)


def trace(y: GroupRingElement, M: int) -> GroupRingElement:
    """nu_{n,M}: sigma_b -> sum of the sigma_a with a = b mod n."""
    if M < 1 or M % y.M:
        raise NotDivisor(f"{y.M} does not divide {M}")
    return GroupRingElement(M, np.tile(y.c, M // y.M), y.ring)


def teichmuller_component(x: GroupRingElement, i: int, p: int) -> GroupRingElement:
    """omega^i-twisted fibre sums from modulus m*p down to m, over F_p."""
    if not is_prime(p) or p < 3:
        raise NotPrime(f"{p} is not an odd prime")
    if x.M % p or (x.M // p) % p == 0:
        raise BadModulus(f"{p} must divide {x.M} exactly once")
    m = x.M // p
    a = np.arange(x.M, dtype=np.int64)
    w = np.array([pow(int(t), i % (p - 1), p) for t in range(p)], dtype=np.int64)[a % p]
    vals = _mod_p_array(x.c, p) * w % p
    return GroupRingElement(m, vals.reshape(p, m).sum(axis=0) % p, ModRing(p, 1))


@dataclass
class KolyvaginQuotient:
    """F_p[eps_1..eps_s]/(eps_j^2), coefficients keyed by bitmask of the eps_j."""

    p: int
    primes: tuple[int, ...]
    coeffs: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {s: v % self.p for s, v in self.coeffs.items() if v % self.p}

    def mask(self, subset: Iterable[int]) -> int:
        return sum(1 << self.primes.index(ell) for ell in subset)

    def coefficient(self, subset: Iterable[int] = ()) -> int:
        return self.coeffs.get(self.mask(subset), 0)

    @property
    def leading(self) -> int:
        """Coefficient of the full product eps_1 ... eps_s."""
        return self.coeffs.get((1 << len(self.primes)) - 1, 0)

    def __mul__(self, other: "KolyvaginQuotient") -> "KolyvaginQuotient":
        if (self.p, self.primes) != (other.p, other.primes):
            raise BadModulus("Kolyvagin quotients differ")
        out: dict[int, int] = {}
        for s, u in self.coeffs.items():
            for t, v in other.coeffs.items():
                if s & t == 0:
                    out[s | t] = (out.get(s | t, 0) + u * v) % self.p
        return KolyvaginQuotient(self.p, self.primes, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KolyvaginQuotient)
            and (self.p, self.primes, self.coeffs) == (other.p, other.primes, other.coeffs)
        )


def kolyvagin_expand(
    x: GroupRingElement, p: int, roots: Sequence[tuple[int, int]]
) -> KolyvaginQuotient:
    """Image of ``x`` under sigma_{eta_j} -> 1 + eps_j for m = prod ell_j.

    The coefficient of prod_{j in S} eps_j is sum_a c_a prod_{j in S} log_{eta_j}(a) mod p.
    """
    primes = tuple(ell for ell, _ in roots)
    m = math.prod(primes)
    if x.M != m or len(set(primes)) != len(primes) or not is_squarefree(m):
        raise NotSquareFree(f"modulus {x.M} is not the square-free product of {primes}")
    logs = []
    units = np.flatnonzero(unit_mask(m))
    for ell, eta in roots:
        if multiplicative_order(eta, ell) != ell - 1:
            raise NotPrimitiveRoot(f"{eta} is not a primitive root mod {ell}")
        logs.append(LogTable(ell, eta).full_table()[units % ell] % p)
    vals = _mod_p_array(x.c[units], p)
    out = {}
    s = len(primes)
    for size in range(s + 1):
        for sub in combinations(range(s), size):
            w = vals.copy()
            for j in sub:
                w = w * logs[j] % p
            out[sum(1 << j for j in sub)] = int(w.sum() % p)
    return KolyvaginQuotient(p, primes, out)


def augmentation_order(x: TruncPoly) -> int | float:
    """ord_X of the reduction mod p; ``math.inf`` if it vanishes."""
    return x.x_valuation_mod_p()
