"""Exact arithmetic substrate.

Integers and rationals are Python ``int`` / ``fractions.Fraction``; primality
and factorisation are delegated to sympy.  Everything else here (primitive
roots, baby-step/giant-step logarithms, Teichmuller lifts, the unit root of
the Hecke polynomial and the truncated Iwasawa polynomial ring) is local.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint, isprime, primerange

from .errors import NotOrdinary, NotPrime, NotUnit, ZeroVector

__all__ = [
    "ModRing",
    "TruncPoly",
    "PrimeTable",
    "LogTable",
    "primitive_root",
    "multiplicative_order",
    "discrete_log",
    "teichmuller",
    "hensel_unit_root",
    "content_normalize",
    "is_prime",
    "factor",
    "primes_up_to",
    "is_squarefree",
    "euler_phi",
    "units_mod",
]


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def factor(n: int) -> dict[int, int]:
    return {int(p): int(e) for p, e in factorint(n).items()}


def primes_up_to(bound: int) -> list[int]:
    return [int(q) for q in primerange(2, bound + 1)]


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factor(n).values())


@lru_cache(maxsize=4096)
def euler_phi(n: int) -> int:
    out = n
    for q in factor(n):
        out -= out // q
    return out


@lru_cache(maxsize=256)
def units_mod(m: int) -> tuple[int, ...]:
    """Residues 1 <= a < m (or 0 for m = 1) prime to m, ascending."""
    if m == 1:
        return (0,)
    return tuple(a for a in range(1, m) if math.gcd(a, m) == 1)


@dataclass(frozen=True)
class ModRing:
    """The ring Z/p^M for an odd prime p."""

    p: int
    M: int = 1

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise NotPrime(f"{self.p} is not an odd prime")
        if self.M < 1:
            raise ValueError("precision exponent must be >= 1")

    @property
    def modulus(self) -> int:
        return self.p**self.M

    def __call__(self, x) -> int:
        """Reduce an integer or a p-integral rational."""
        q = self.modulus
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise NotUnit(f"denominator of {x} is divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, q) % q
        return int(x) % q

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise NotUnit(f"{x} is not a unit mod {self.p}")
        return pow(x, -1, self.modulus)


def multiplicative_order(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise NotUnit(f"{a} is not a unit mod {n}")
    order = euler_phi(n)
    for q in factor(order):
        while order % q == 0 and pow(a, order // q, n) == 1:
            order //= q
    return order


@lru_cache(maxsize=None)
def primitive_root(ell: int) -> int:
    """Smallest positive primitive root modulo the odd prime ``ell``."""
    if ell < 3 or not is_prime(ell):
        raise NotPrime(f"{ell} is not an odd prime")
    qs = list(factor(ell - 1))
    for g in range(2, ell):
        if all(pow(g, (ell - 1) // q, ell) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")


class LogTable:
    """Discrete logarithms to base ``eta`` mod the prime ``ell``.

    Lookups use baby-step/giant-step with a table of ceil(sqrt(ell - 1))
    baby steps.  Once more than ceil(sqrt(ell)) lookups have been served the
    full table (an ``ell``-entry numpy array) is built and used instead.
    """

    def __init__(self, ell: int, eta: int | None = None):
        if ell < 3 or not is_prime(ell):
            raise NotPrime(f"{ell} is not an odd prime")
        self.ell = ell
        self.eta = primitive_root(ell) if eta is None else eta % ell
        self.order = ell - 1
        self._step = math.isqrt(self.order - 1) + 1 if self.order > 1 else 1
        self._baby: dict[int, int] | None = None
        self._full: np.ndarray | None = None
        self._uses = 0
        self._threshold = math.isqrt(ell - 1) + 1

    def _baby_steps(self) -> dict[int, int]:
        if self._baby is None:
            baby, x = {}, 1
            for j in range(self._step):
                baby.setdefault(x, j)
                x = x * self.eta % self.ell
            self._baby = baby
        return self._baby

    def full_table(self) -> np.ndarray:
        """Array ``t`` with ``t[a] = log(a)`` for units a; ``t[0] = -1``."""
        if self._full is None:
            t = np.full(self.ell, -1, dtype=np.int64)
            x = 1
            for e in range(self.order):
                if t[x] != -1:
                    raise NotPrime(f"{self.eta} is not a primitive root mod {self.ell}")
                t[x] = e
                x = x * self.eta % self.ell
            self._full = t
        return self._full

    def bsgs(self, a: int) -> int:
        a %= self.ell
        if a == 0:
            raise NotUnit(f"{self.ell} divides the argument")
        baby = self._baby_steps()
        giant = pow(self.eta, -self._step, self.ell)
        y = a
        for i in range(self._step + 1):
            j = baby.get(y)
            if j is not None:
                e = (i * self._step + j) % self.order
                if pow(self.eta, e, self.ell) == a:
                    return e
            y = y * giant % self.ell
        raise NotUnit(f"{a} is not a power of {self.eta} mod {self.ell}")

    def __call__(self, a: int) -> int:
        a %= self.ell
        if a == 0:
            raise NotUnit(f"{self.ell} divides the argument")
        if self._full is not None:
            return int(self._full[a])
        self._uses += 1
        if self._uses > self._threshold:
            return int(self.full_table()[a])
        return self.bsgs(a)


def discrete_log(a: int, eta: int, ell: int) -> int:
    """Exponent e in Z/(ell-1) with eta**e == a (mod ell), by baby-step/giant-step."""
    if a % ell == 0:
        raise NotUnit(f"{ell} divides {a}")
    return LogTable(ell, eta).bsgs(a)


def teichmuller(a: int, ring: ModRing) -> int:
    """The (p-1)-st root of unity mod p^M congruent to ``a`` mod p."""
    p, q = ring.p, ring.modulus
    if a % p == 0:
        raise NotUnit(f"{p} divides {a}")
    x = a % q
    while True:
        y = pow(x, p, q)
        if y == x:
            return x
        x = y


def hensel_unit_root(a_p: int, ring: ModRing, k: int = 2) -> int:
    """Unit root alpha of x^2 - a_p x + p^(k-1) mod p^M (Newton iteration)."""
    p, q = ring.p, ring.modulus
    if a_p % p == 0:
        raise NotOrdinary(f"p = {p} divides a_p = {a_p}")
    c = p ** (k - 1)
    alpha = a_p % p
    prec = 1
    while prec < ring.M:
        prec = min(2 * prec, ring.M)
        mod = p**prec
        f = (alpha * alpha - a_p * alpha + c) % mod
        df = (2 * alpha - a_p) % mod  # == alpha - beta, a unit
        alpha = (alpha - f * pow(df, -1, mod)) % mod
    return alpha % q


def content_normalize(v: Sequence) -> tuple[list[int], Fraction]:
    """Scale ``v`` to a primitive integer vector with positive leading entry.

    Returns ``(w, s)`` with ``w = s * v``.
    """
    fr = [Fraction(x) for x in v]
    if not any(fr):
        raise ZeroVector("cannot normalise the zero vector")
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(math.gcd, ints, 0)
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return [x // g for x in ints], Fraction(den, g)


@dataclass
class PrimeTable:
    """Primes up to ``bound`` with their canonical primitive roots.

    ``overrides`` replaces the smallest primitive root for chosen primes.
    """

    bound: int
    overrides: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.primes = primes_up_to(self.bound)
        self._roots: dict[int, int] = {}
        self._logs: dict[int, LogTable] = {}
        for ell, g in self.overrides.items():
            if multiplicative_order(g, ell) != ell - 1:
                from .errors import NotPrimitiveRoot

                raise NotPrimitiveRoot(f"{g} is not a primitive root mod {ell}")

    def root(self, ell: int) -> int:
        if ell in self.overrides:
            return self.overrides[ell] % ell
        if ell not in self._roots:
            self._roots[ell] = primitive_root(ell)
        return self._roots[ell]

    def log(self, ell: int) -> LogTable:
        if ell not in self._logs:
            self._logs[ell] = LogTable(ell, self.root(ell))
        return self._logs[ell]


class TruncPoly:
    """Element of (Z/p^M)[X] / ((1+X)^{p^n} - 1), stored by X-power coefficients."""

    __slots__ = ("ring", "n", "coeffs")

    def __init__(self, ring: ModRing, n: int, coeffs: Iterable[int] = ()):
        self.ring = ring
        self.n = n
        q = ring.modulus
        c = [int(x) % q for x in coeffs]
        d = self.size
        if len(c) > d:
            c = _reduce_cyclotomic(c, ring.p**n, q)
        self.coeffs = tuple(c + [0] * (d - len(c)))

    @property
    def size(self) -> int:
        return self.ring.p**self.n

    @classmethod
    def from_group_coeffs(cls, ring: ModRing, n: int, by_exponent: Sequence[int]) -> "TruncPoly":
        """Convert sum_e c_e (1+X)^e (e < p^n) to X-power coefficients."""
        q = ring.modulus
        d = ring.p**n
        if len(by_exponent) > d:
            raise ValueError("more group coefficients than the group order")
        c = [int(x) % q for x in by_exponent] + [0] * (d - len(by_exponent))
        if q < 2**31:
            # Horner in (1+X): acc <- acc*(1+X) + c_e, exact in int64.
            acc = np.zeros(d, dtype=np.int64)
            for e in range(d - 1, -1, -1):
                acc[1:] = (acc[1:] + acc[:-1]) % q
                acc[0] = (acc[0] + c[e]) % q
            return cls(ring, n, acc.tolist())
        acc = [0] * d
        for e in range(d - 1, -1, -1):
            for j in range(d - 1, 0, -1):
                acc[j] = (acc[j] + acc[j - 1]) % q
            acc[0] = (acc[0] + c[e]) % q
        return cls(ring, n, acc)

    @classmethod
    def one(cls, ring: ModRing, n: int) -> "TruncPoly":
        return cls(ring, n, [1])

    @classmethod
    def gen(cls, ring: ModRing, n: int) -> "TruncPoly":
        """The image of the topological generator, 1 + X."""
        return cls(ring, n, [1, 1] if ring.p**n > 1 else [2])

    def _check(self, other: "TruncPoly"):
        if self.ring != other.ring or self.n != other.n:
            raise ValueError("incompatible truncated polynomial rings")

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        return TruncPoly(self.ring, self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        return TruncPoly(self.ring, self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other) -> "TruncPoly":
        if isinstance(other, int):
            return TruncPoly(self.ring, self.n, [a * other for a in self.coeffs])
        self._check(other)
        prod = np.convolve(
            np.array(self.coeffs, dtype=object), np.array(other.coeffs, dtype=object)
        )
        return TruncPoly(self.ring, self.n, [int(x) for x in prod])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncPoly":
        out, base = TruncPoly.one(self.ring, self.n), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncPoly)
            and self.ring == other.ring
            and self.n == other.n
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.n, self.coeffs))

    def __repr__(self):
        nz = [(j, c) for j, c in enumerate(self.coeffs) if c]
        body = " + ".join(f"{c}*X^{j}" for j, c in nz[:6]) or "0"
        if len(nz) > 6:
            body += " + ..."
        return f"TruncPoly(p={self.ring.p}, M={self.ring.M}, n={self.n}: {body})"

    def mod_p(self) -> list[int]:
        return [c % self.ring.p for c in self.coeffs]

    def is_zero_mod_p(self) -> bool:
        return not any(self.mod_p())

    def x_valuation_mod_p(self) -> float | int:
        """ord_X of the reduction mod p; ``math.inf`` when it vanishes."""
        for j, c in enumerate(self.coeffs):
            if c % self.ring.p:
                return j
        return math.inf

    def reduce_level(self, n: int) -> "TruncPoly":
        """Image under (1+X)^{p^self.n} - 1  ->  (1+X)^{p^n} - 1, n <= self.n."""
        if n > self.n:
            raise ValueError("can only reduce to a lower level")
        return TruncPoly(self.ring, n, list(self.coeffs))


def _reduce_cyclotomic(c: list[int], d: int, q: int) -> list[int]:
    """Reduce X-coefficients modulo (1+X)^d - 1 (monic of degree d)."""
    rel = [math.comb(d, j) % q for j in range(d)]  # X^d == -sum_{j<d} rel[j] X^j, rel[0]=1 cancels
    rel[0] = 0
    c = list(c)
    for top in range(len(c) - 1, d - 1, -1):
        t = c[top] % q
        if t:
            shift = top - d
            for j in range(1, d):
                if rel[j]:
                    c[shift + j] = (c[shift + j] - t * rel[j]) % q
        c[top] = 0
    return [x % q for x in c[:d]]
