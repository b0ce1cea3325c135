"""Kolyvagin primes, Kurihara numbers and the search for a nonvanishing witness."""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .arith import LogTable, ModRing, PrimeTable, is_prime, multiplicative_order, primes_up_to
from .eigenform import CONVENTION, CurveModel, NormalizedEigenSymbol, SymbolEigenform, count_points, resolve
from .errors import BadPrime, NotKolyvagin, NotPrimitiveRoot, NotSquareFree
from .groupring import GroupRingElement, kolyvagin_expand, teichmuller_component, unit_mask
from .mazurtate import theta_values

__all__ = [
    "KolyvaginPrime",
    "KuriharaCertificate",
    "LeadingCoeffReport",
    "SearchStrategy",
    "ExhaustionReport",
    "kolyvagin_primes",
    "kurihara_number",
    "replay",
    "derivative_operator",
    "leading_coeff_check",
    "search_delta",
    "euler_factor_mod_p",
]


@dataclass(frozen=True)
class KolyvaginPrime:
    ell: int
    eta: int
    index: int
    a_ell: int


def _a_ell(src, ell: int) -> int:
    if isinstance(src, CurveModel):
        return ell + 1 - count_points(src.ainvs, ell)
    if isinstance(src, SymbolEigenform):
        src = resolve(src)
    return src.hecke_eigenvalue(ell)


def kolyvagin_primes(
    src, p: int, bound: int, roots: PrimeTable | None = None, a_table: dict[int, int] | None = None
) -> list[KolyvaginPrime]:
    """All Kolyvagin primes ell <= bound, ascending.

    ``src`` is a CurveModel (point counts), a SymbolEigenform or a
    NormalizedEigenSymbol (Hecke action).  ``a_table`` is consulted first
    and filled with any a_ell computed here.
    """
    N = src.N
    if not is_prime(p) or p < 3 or N % p == 0:
        raise BadPrime(f"{p} must be an odd prime not dividing {N}")
    roots = roots or PrimeTable(0)
    out = []
    for ell in primes_up_to(bound):
        if ell % p != 1 or N % ell == 0:
            continue
        if a_table is not None and ell in a_table:
            a = a_table[ell]
        else:
            a = _a_ell(src, ell)
            if a_table is not None:
                a_table[ell] = a
        if (a - ell - 1) % p:
            continue
        index, t = 0, ell - 1
        while t % p == 0:
            index, t = index + 1, t // p
        out.append(KolyvaginPrime(ell, roots.root(ell), index, a))
    return out


def euler_factor_mod_p(a_p: int, p: int, k: int, r: int) -> int:
    """(1 - a_p p^-r + p^(k-1-2r)) times the least power of p making it integral, mod p."""
    e = max(r, 2 * r + 1 - k, 0)
    val = (1 - Fraction(a_p, p**r) + Fraction(p) ** (k - 1 - 2 * r)) * p**e
    return int(val) % p


@dataclass
class KuriharaCertificate:
    form_id: str
    p: int
    r: int
    i: int
    m: int
    factors: list[tuple[int, int]]
    value: int
    fingerprint: str
    convention: str = CONVENTION
    euler_factor: int | None = None
    seed: int | None = None
    attestation: str | None = None

    @property
    def nonzero(self) -> bool:
        return self.value != 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["factors"] = [list(x) for x in self.factors]
        return d


def _normalise_factors(nes: NormalizedEigenSymbol, p: int, primes) -> list[tuple[int, int]]:
    """(ell, eta) pairs after validating the Kolyvagin and primitive-root conditions."""
    out = []
    for x in primes:
        ell, eta = (x.ell, x.eta) if isinstance(x, KolyvaginPrime) else (int(x[0]), int(x[1]))
        if not is_prime(ell) or ell % p != 1 or (nes.N * p) % ell == 0:
            raise NotKolyvagin(f"{ell} is not a Kolyvagin prime for p = {p}")
        if (nes.hecke_eigenvalue(ell) - ell - 1) % p:
            raise NotKolyvagin(f"a_{ell} is not congruent to {ell} + 1 mod {p}")
        if multiplicative_order(eta, ell) != ell - 1:
            raise NotPrimitiveRoot(f"{eta} is not a primitive root mod {ell}")
        out.append((ell, eta % ell))
    if len({ell for ell, _ in out}) != len(out):
        raise NotSquareFree("repeated prime factor")
    return sorted(out)


def _log_weights(M: int, factors: Sequence[tuple[int, int]], p: int) -> np.ndarray:
    """prod_j log_{eta_j}(a mod ell_j) mod p for every residue a mod M."""
    a = np.arange(M, dtype=np.int64)
    w = np.ones(M, dtype=np.int64)
    for ell, eta in factors:
        table = LogTable(ell, eta).full_table() % p
        w = w * table[a % ell] % p
    return w


def kurihara_number(
    nes: NormalizedEigenSymbol, p: int, r: int, primes: Iterable, i: int = 0, seed: int | None = None
) -> KuriharaCertificate:
    """The mod-p Kurihara number at m = prod ell (branch i) with its certificate."""
    if not is_prime(p) or p < 3 or nes.N % p == 0:
        raise BadPrime(f"{p} must be an odd prime not dividing {nes.N}")
    factors = _normalise_factors(nes, p, primes)
    m = math.prod(ell for ell, _ in factors)
    i %= p - 1
    M = m if i == 0 else m * p
    F = ModRing(p, 1)
    vals = theta_values(nes, M, r)
    if vals.dtype == object:
        vals = np.array([F(v) for v in vals], dtype=np.int64)
    w = _log_weights(M, factors, p)
    if i:
        tw = np.array([pow(t, i, p) for t in range(p)], dtype=np.int64)
        w = w * tw[np.arange(M) % p] % p
    mask = unit_mask(M)
    value = int(((vals % p) * w % p)[mask].sum() % p)
    euler = None
    if i == 0:
        euler = euler_factor_mod_p(nes.hecke_eigenvalue(p), p, nes.k, r)
    return KuriharaCertificate(
        nes.form_id, p, r, i, m, factors, value, nes.fingerprint, euler_factor=euler, seed=seed
    )


def replay(cert: KuriharaCertificate, nes: NormalizedEigenSymbol) -> bool:
    """Recompute the certificate from its inputs; True iff everything matches."""
    if nes.fingerprint != cert.fingerprint:
        return False
    again = kurihara_number(nes, cert.p, cert.r, cert.factors, cert.i, cert.seed)
    return again.value == cert.value and again.euler_factor == cert.euler_factor


def derivative_operator(primes: Sequence[tuple[int, int]]) -> GroupRingElement:
    """D_m = prod_ell sum_{j=1}^{ell-2} j sigma_{eta_ell}^j, over Z[(Z/m)^x]."""
    ells = [int(ell) for ell, _ in primes]
    m = math.prod(ells)
    if len(set(ells)) != len(ells) or any(not is_prime(ell) for ell in ells):
        raise NotSquareFree(f"{ells} is not a list of distinct primes")
    a = np.arange(m, dtype=np.int64)
    c = np.ones(m, dtype=object)
    for ell, eta in primes:
        if multiplicative_order(eta, ell) != ell - 1:
            raise NotPrimitiveRoot(f"{eta} is not a primitive root mod {ell}")
        # sigma_{eta}^j is the residue eta^j mod ell and 1 mod the other factors
        c = c * LogTable(ell, eta).full_table()[a % ell].astype(object)
    return GroupRingElement(m, c)


@dataclass
class LeadingCoeffReport:
    m: int
    i: int
    lower_terms_vanish: bool
    top_coeff: int
    delta: int

    @property
    def matches_delta(self) -> bool:
        return self.top_coeff == self.delta


def leading_coeff_check(
    nes: NormalizedEigenSymbol, p: int, r: int, primes: Iterable, i: int = 0
) -> LeadingCoeffReport:
    """Expand the (twisted) theta in F_p[eps]/(eps^2) and compare its top coefficient with delta."""
    factors = _normalise_factors(nes, p, primes)
    m = math.prod(ell for ell, _ in factors)
    i %= p - 1
    F = ModRing(p, 1)
    M = m if i == 0 else m * p
    vals = theta_values(nes, M, r)
    if vals.dtype == object:
        vals = np.array([F(v) for v in vals], dtype=np.int64)
    x = GroupRingElement(M, vals % p, F)
    if i:
        x = teichmuller_component(x, i, p)
    exp = kolyvagin_expand(x, p, factors)
    full = (1 << len(factors)) - 1
    lower = all(v == 0 for s, v in exp.coeffs.items() if s != full)
    delta = kurihara_number(nes, p, r, factors, i).value
    return LeadingCoeffReport(m, i, lower, exp.leading, delta)


@dataclass(frozen=True)
class SearchStrategy:
    max_factors: int = 2
    prime_bound: int = 10_000
    budget: int = 100
    seed: int | None = None


@dataclass
class ExhaustionReport:
    strategy: SearchStrategy
    tried: list[tuple[int, int]] = field(default_factory=list)  # (m, value)

    @property
    def trials(self) -> int:
        return len(self.tried)


def _candidates(primes: Sequence[KolyvaginPrime], strategy: SearchStrategy) -> list[tuple[KolyvaginPrime, ...]]:
    rng = random.Random(strategy.seed) if strategy.seed is not None else None
    out = []
    for size in range(strategy.max_factors + 1):
        level = list(combinations(primes, size))
        if rng is not None:
            rng.shuffle(level)
        out.extend(level)
    return out


def search_delta(
    nes: NormalizedEigenSymbol,
    p: int,
    r: int,
    i: int,
    strategy: SearchStrategy,
    primes: Sequence[KolyvaginPrime] | None = None,
    jobs: int = 1,
) -> KuriharaCertificate | ExhaustionReport:
    """First nonzero Kurihara number in (factor count, lexicographic) order.

    With a seed the order inside each factor count is a seeded shuffle.
    Parallel evaluation keeps the same order: results are consumed in
    sequence, so the returned witness does not depend on ``jobs``.
    """
    if primes is None:
        primes = kolyvagin_primes(nes, p, strategy.prime_bound)
    primes = [q for q in primes if q.ell <= strategy.prime_bound]
    cands = _candidates(primes, strategy)[: max(strategy.budget, 0)]
    report = ExhaustionReport(strategy)

    def run(c):
        return kurihara_number(nes, p, r, c, i, strategy.seed)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(run, cands)
            for cert in results:
                report.tried.append((cert.m, cert.value))
                if cert.nonzero:
                    return cert
        return report
    for c in cands:
        cert = run(c)
        report.tried.append((cert.m, cert.value))
        if cert.nonzero:
            return cert
    return report
