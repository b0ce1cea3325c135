"""Newforms with rational Hecke eigenvalues and their normalised period integrals."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .arith import content_normalize, is_prime, primes_up_to
from .errors import (
    AmbiguousEigensystem,
    ConductorMismatch,
    DegreeTooLarge,
    NotPrime,
    SingularCurve,
)
from .modsym import (
    ManinSymbolSpace,
    SymbolVector,
    auto_eigenvalues,
    build_space,
    cuspidal_eigen_symbol,
    poly_substitute,
)

__all__ = [
    "CurveModel",
    "SymbolEigenform",
    "NormalizedEigenSymbol",
    "eigenvalue",
    "count_points",
    "optimal_normalize",
    "resolve",
    "period_lambda",
    "period_integral",
    "period_integrals_mod",
    "CONVENTION",
]

# Recorded in certificates: how paths, signs and Frobenius are matched.
CONVENTION = (
    "lambda(f,P;a,m) = <f, P(mX+aY){oo -> -a/m}>; "
    "[a/m]^s_r uses the iota-eigensymbol of sign s*(-1)^(r-1); "
    "Frob_l = sigma_l carries l^(r-1)"
)


@dataclass(frozen=True)
class CurveModel:
    """Integral Weierstrass model [a1, a2, a3, a4, a6] with user-supplied conductor."""

    ainvs: tuple[int, int, int, int, int]
    N: int
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "ainvs", tuple(int(a) for a in self.ainvs))
        if len(self.ainvs) != 5:
            raise ValueError("need five Weierstrass coefficients")
        if self.discriminant == 0:
            raise SingularCurve(f"{self.ainvs} has zero discriminant")

    k = 2

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def form_id(self) -> str:
        return self.label or f"curve{list(self.ainvs)}N{self.N}"


def count_points(ainvs: Sequence[int], ell: int) -> int:
    """#E(F_ell) including the point at infinity (and any singular point)."""
    a1, a2, a3, a4, a6 = (int(a) % ell for a in ainvs)
    if ell == 2:
        n = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    n += 1
        return n
    x = np.arange(ell, dtype=np.int64)
    f = ((x * x % ell) * x + a2 * (x * x % ell) + a4 * x + a6) % ell
    disc = ((a1 * x + a3) ** 2 + 4 * f) % ell
    sq = np.zeros(ell, dtype=np.int64)
    sq[(x * x) % ell] = 1
    chi = 2 * sq - 1
    chi[0] = 0
    return int(ell + chi[disc].sum()) + 1


@dataclass
class SymbolEigenform:
    """A newform given by (N, k) and optionally pinned eigenvalues."""

    N: int
    k: int
    pins: dict[int, int] = field(default_factory=dict)
    bound: int = 20
    label: str = ""

    @property
    def form_id(self) -> str:
        return self.label or f"N{self.N}k{self.k}"


def _eigenvalue_from_symbol(v: SymbolVector, ell: int) -> int:
    space = v.space
    gv = v.gen_values
    g0 = next(g for g in range(space.ngens) if gv[g])
    a = v(space.apply_hecke_to_gen(ell, g0)) / gv[g0]
    if a.denominator != 1:
        raise AmbiguousEigensystem(f"T_{ell} eigenvalue {a} is not integral")
    return int(a)


def eigenvalue(src, ell: int, nes: "NormalizedEigenSymbol | None" = None) -> int:
    """a_ell by point counting (curves) or from the T_ell action (symbols)."""
    if not is_prime(ell):
        raise NotPrime(f"{ell} is not prime")
    if isinstance(src, CurveModel):
        return ell + 1 - count_points(src.ainvs, ell)
    if nes is None:
        nes = resolve(src)
    return nes.hecke_eigenvalue(ell)


@dataclass
class NormalizedEigenSymbol:
    """The +/- eigen-symbols scaled to optimal periods.

    ``plus`` / ``minus`` are the iota-eigenfunctionals; their values on every
    Manin generator are coprime integers with positive leading value.
    ``scale`` is an extra global multiplier (1 for the optimal normalisation).
    """

    space: ManinSymbolSpace
    plus: SymbolVector
    minus: SymbolVector
    s_plus: Fraction
    s_minus: Fraction
    form_id: str = ""
    scale: Fraction = Fraction(1)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def N(self) -> int:
        return self.space.N

    @property
    def k(self) -> int:
        return self.space.k

    def part(self, iota_sign: int) -> SymbolVector:
        return self.plus if iota_sign == 1 else self.minus

    def hecke_eigenvalue(self, ell: int) -> int:
        """a_ell read off from the T_ell action on the plus symbol."""
        key = ("a", ell)
        if key not in self._cache:
            self._cache[key] = _eigenvalue_from_symbol(self.plus, ell)
        return self._cache[key]

    def lattice_values(self, iota_sign: int) -> list[int]:
        return [int(x) for x in self.part(iota_sign).gen_values]

    @cached_property
    def fingerprint(self) -> str:
        blob = json.dumps(
            {
                "N": self.N,
                "k": self.k,
                "plus": [str(x) for x in self.lattice_values(1)],
                "minus": [str(x) for x in self.lattice_values(-1)],
                "scale": str(self.scale),
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode()).hexdigest()

    def rescaled(self, s) -> "NormalizedEigenSymbol":
        """Same symbols with every period multiplied by ``s`` (not optimal unless s = +-1)."""
        return NormalizedEigenSymbol(
            self.space, self.plus, self.minus, self.s_plus, self.s_minus, self.form_id,
            self.scale * Fraction(s),
        )

    @cached_property
    def _tables(self) -> dict[int, np.ndarray]:
        """(c mod N, d mod N) -> integer value of [1, (c:d)], for k = 2."""
        out = {}
        tab = self.space.P1.table
        for sgn in (1, -1):
            vals = np.array(self.lattice_values(sgn), dtype=np.int64)
            out[sgn] = np.where(tab >= 0, vals[np.maximum(tab, 0)], 0)
        return out


def _normalize_part(v: SymbolVector) -> tuple[SymbolVector, Fraction]:
    """Scale so the lattice coordinates of all generator values are coprime integers.

    With value_j / binom(w, j) as coordinates of the Sym^w-valued symbol, the
    coordinate list over all Manin generators spans the same lattice as the
    plain values of the functional on monomial generators, so normalising
    those is equivalent.
    """
    _, s = content_normalize(v.gen_values)
    return v.scaled(s), s


def optimal_normalize(space: ManinSymbolSpace, eigenvalues: dict[int, int], form_id: str = "") -> NormalizedEigenSymbol:
    plus = cuspidal_eigen_symbol(space, eigenvalues, 1)
    minus = cuspidal_eigen_symbol(space, eigenvalues, -1)
    plus, sp = _normalize_part(plus)
    minus, sm = _normalize_part(minus)
    return NormalizedEigenSymbol(space, plus, minus, sp, sm, form_id)


def resolve(src, bound: int = 100) -> NormalizedEigenSymbol:
    """Build the space and the optimally normalised eigen-symbol of ``src``."""
    if isinstance(src, CurveModel):
        space = build_space(src.N, 2)
        eig = {ell: ell + 1 - count_points(src.ainvs, ell) for ell in primes_up_to(bound) if src.N % ell}
        try:
            return optimal_normalize(space, eig, src.form_id)
        except AmbiguousEigensystem as exc:
            raise ConductorMismatch(
                f"point counts of {src.ainvs} do not match a newform of level {src.N}: {exc}"
            ) from exc
    space = build_space(src.N, src.k)
    eig = dict(src.pins)
    if not eig:
        eig = auto_eigenvalues(space, src.bound)
    return optimal_normalize(space, eig, src.form_id)


def _homogenize(poly_z: Sequence, w: int) -> list:
    if len(poly_z) - 1 > w and any(poly_z[w + 1:]):
        raise DegreeTooLarge(f"degree {len(poly_z) - 1} exceeds k-2 = {w}")
    return [c if isinstance(c, Fraction) else int(c) for c in poly_z[: w + 1]] + [0] * (w + 1 - len(poly_z))


def _x_path(nes: NormalizedEigenSymbol, poly_z: Sequence[int], a: int, m: int) -> dict[int, int]:
    """Formal symbol P(mX + aY){oo -> -a/m} underlying lambda(f, P; a, m)."""
    w = nes.space.w
    P = poly_substitute(_homogenize(poly_z, w), m, a, 0, 1)
    return nes.space.path_formal(P, None, Fraction(-a, m))


def period_lambda(nes: NormalizedEigenSymbol, poly_z: Sequence[int], a: int, m: int, iota_sign: int | None = None) -> Fraction:
    """Normalised lambda(f, P; a, m): the sum of both iota-components unless one is asked for."""
    if m < 1:
        raise ValueError("m must be positive")
    x = _x_path(nes, poly_z, a, m)
    if iota_sign is not None:
        return nes.scale * nes.part(iota_sign)(x)
    return nes.scale * (nes.plus(x) + nes.minus(x))


def _monomial(r: int) -> list[int]:
    return [0] * (r - 1) + [1]


def period_integral(nes: NormalizedEigenSymbol, r: int, a: int, m: int, sign: int) -> Fraction:
    """[a/m]^sign_{f,r}; the unsigned [a/m]_{f,r} is the sum over both signs."""
    k = nes.k
    if not 1 <= r <= k - 1:
        raise DegreeTooLarge(f"r = {r} outside 1..{k - 1}")
    if m < 1:
        raise ValueError("m must be positive")
    key = (a % m, m, r, sign)
    hit = nes._cache.get(key)
    if hit is not None:
        return hit
    s = sign * (-1) ** (r - 1)
    part = nes.part(s)
    mono = _monomial(r)
    val = part(_x_path(nes, mono, a, m)) + sign * part(_x_path(nes, mono, -a, m))
    val *= nes.scale
    nes._cache[key] = val
    return val


def period_integrals_mod(
    nes: NormalizedEigenSymbol, m: int, r: int = 1, residues: Sequence[int] | None = None
) -> dict[int, np.ndarray]:
    """Both signed period integrals [a/m]^{+-} for every residue 0 <= a < m.

    Returns ``{+1: array, -1: array}`` of exact integers (int64 or object).
    Weight 2 uses a vectorised continued-fraction walk; other weights fall
    back to ``period_integral`` (on ``residues`` only, if given; others are 0).
    """
    if not 1 <= r <= nes.k - 1:
        raise DegreeTooLarge(f"r = {r} outside 1..{nes.k - 1}")
    if nes.k == 2:
        V = _bulk_weight2(nes, m)
        neg = (-np.arange(m)) % m
        out = {1: V[1] + V[1][neg], -1: V[-1] - V[-1][neg]}
        if nes.scale != 1:
            out = {s: v.astype(object) * nes.scale for s, v in out.items()}
        return out
    out = {}
    for sgn in (1, -1):
        arr = np.zeros(m, dtype=object)
        for a in range(m) if residues is None else residues:
            arr[a % m] = period_integral(nes, r, a, m, sgn)
        out[sgn] = arr
    return out


def _bulk_weight2(nes: NormalizedEigenSymbol, m: int, chunk: int = 1 << 20) -> dict[int, np.ndarray]:
    """phi^{+-}({oo -> -a/m}) for all a in 0..m-1 by a vectorised Euclid walk.

    Residues are processed in chunks; within a chunk, finished expansions
    are written out and dropped after every step.  Every intermediate value
    is bounded by m, so int32 suffices below 2^31.
    """
    N = nes.N
    it = np.int32 if m < 2**31 else np.int64
    tp = nes._tables[1].ravel()
    tm = nes._tables[-1].ravel()
    out = {1: np.zeros(m, dtype=np.int64), -1: np.zeros(m, dtype=np.int64)}
    for lo in range(0, m, chunk):
        idx = np.arange(lo, min(m, lo + chunk), dtype=np.int64)
        g = np.gcd(idx, m)
        num = (-idx // g).astype(it)
        den = (m // g).astype(it)
        q2 = np.ones(idx.size, dtype=it)
        q1 = np.zeros(idx.size, dtype=it)
        sp = np.zeros(idx.size, dtype=np.int64)
        sm = np.zeros(idx.size, dtype=np.int64)
        j = 0
        while idx.size:
            a = num // den
            q0 = a * q1 + q2
            c = q0 if j % 2 == 1 else -q0
            key = (c % N) * N + q1 % N
            sp += tp[key]
            sm += tm[key]
            num, den = den, num - a * den
            q2, q1 = q1, q0
            done = den == 0
            if done.any():
                out[1][idx[done]] = sp[done]
                out[-1][idx[done]] = sm[done]
                keep = ~done
                idx, num, den, q1, q2, sp, sm = (x[keep] for x in (idx, num, den, q1, q2, sp, sm))
            j += 1
    return out
