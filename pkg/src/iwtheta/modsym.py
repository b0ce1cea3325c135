"""Manin symbols for Gamma_0(N) in weight k >= 2 with exact rational linear algebra.

Conventions.  A homogeneous polynomial of degree w = k - 2 is the list of its
coefficients on X^j Y^(w-j), j = 0..w.  The Manin symbol [P, (c:d)] is
g(P{0, oo}) for any g = (a b; c d) in SL_2(Z); the right action of a matrix
h = (a b; c d) is [P, (u:v)] h = [P(aX + bY, cX + dY), (u:v) h], and the
modular symbol P{alpha, beta} pairs with a form f as the integral of
f(z) P(z, 1) dz from alpha to beta.  The involution ``iota`` is the geometric
action of diag(-1, 1): P{alpha, beta} -> P(-X, Y){-alpha, -beta}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .arith import content_normalize, is_prime
from .errors import AmbiguousEigensystem, NonRational, ResourceLimit
from .linalg import echelon, integral_row, kernel, solve_in_span

__all__ = [
    "P1List",
    "ManinSymbolSpace",
    "SymbolVector",
    "build_space",
    "hecke_matrix",
    "star_involution",
    "cuspidal_eigen_symbol",
    "evaluate_path",
    "pair_path",
    "unimodular_segments",
    "heilbronn_merel",
    "poly_substitute",
    "RESOURCE_LIMIT",
]

RESOURCE_LIMIT = 20000  # guard on N * k


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class P1List:
    """P^1(Z/N) with a dense (c mod N, d mod N) -> index lookup table."""

    def __init__(self, N: int):
        self.N = N
        table = np.full((N, N), -1, dtype=np.int64)
        units = [u for u in range(1, N + 1) if math.gcd(u, N) == 1] if N > 1 else [1]
        reps = []
        for c in range(N):
            for d in range(N):
                if table[c, d] != -1 or math.gcd(math.gcd(c, d), N) != 1:
                    continue
                if N == 1:
                    table[0, 0] = 0
                    reps.append((0, 1))
                    continue
                orbit = {(u * c % N, u * d % N) for u in units}
                rep = min(orbit)
                idx = len(reps)
                reps.append(rep)
                for cc, dd in orbit:
                    table[cc, dd] = idx
        self.table = table
        # order representatives canonically
        order = sorted(range(len(reps)), key=lambda i: reps[i])
        remap = np.empty(len(reps), dtype=np.int64)
        for new, old in enumerate(order):
            remap[old] = new
        self.table = np.where(table >= 0, remap[np.maximum(table, 0)], -1)
        self.reps = [reps[i] for i in order]

    def __len__(self):
        return len(self.reps)

    def index(self, c: int, d: int) -> int:
        """Index of (c:d), or -1 when gcd(c, d, N) > 1."""
        N = self.N
        return int(self.table[c % N, d % N])


def poly_substitute(coeffs: Sequence, a: int, b: int, c: int, d: int) -> list:
    """Coefficients of P(aX + bY, cX + dY) for homogeneous P of degree len-1."""
    w = len(coeffs) - 1
    # powers of the two linear forms as coefficient lists on X^j Y^(deg-j)
    pa = [[1]]
    pc = [[1]]
    for _ in range(w):
        prev = pa[-1]
        nxt = [0] * (len(prev) + 1)
        for j, v in enumerate(prev):
            nxt[j] += b * v
            nxt[j + 1] += a * v
        pa.append(nxt)
        prev = pc[-1]
        nxt = [0] * (len(prev) + 1)
        for j, v in enumerate(prev):
            nxt[j] += d * v
            nxt[j + 1] += c * v
        pc.append(nxt)
    out = [0] * (w + 1)
    for j, pj in enumerate(coeffs):
        if not pj:
            continue
        A, C = pa[j], pc[w - j]
        for s, va in enumerate(A):
            if not va:
                continue
            for t, vc in enumerate(C):
                if vc:
                    out[s + t] += pj * va * vc
    return out


@lru_cache(maxsize=256)
def heilbronn_merel(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """Merel's set: (a b; c d) with ad - bc = n, a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, n + 1):
        for d in range(1, n + 2 - a):
            bc = a * d - n
            if bc < 0:
                continue
            if bc == 0:
                out.extend((a, b, 0, d) for b in range(a))
                out.extend((a, 0, c, d) for c in range(1, d))
                continue
            for b in range(1, a):
                if bc % b == 0 and bc // b < d:
                    out.append((a, b, bc // b, d))
    return tuple(out)


@lru_cache(maxsize=256)
def heilbronn_cremona(p: int) -> tuple[tuple[int, int, int, int], ...]:
    """Cremona's Heilbronn matrices of determinant p (p prime), from nearest-integer continued fractions."""
    out = [(1, 0, 0, p)]
    for r in range(-(p // 2), p // 2 + 1):
        x1, x2, y1, y2, a, b = p, -r, 0, 1, -p, r
        out.append((x1, x2, y1, y2))
        while b:
            q = round(Fraction(a, b))
            c = a - b * q
            a, b = -b, c
            x1, x2 = x2, q * x2 - x1
            y1, y2 = y2, q * y2 - y1
            out.append((x1, x2, y1, y2))
    return tuple(out)


def hecke_set(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """Matrices whose summed action is T_n: Cremona's set for odd primes, Merel's otherwise."""
    return heilbronn_cremona(n) if n > 2 and is_prime(n) else heilbronn_merel(n)


def unimodular_segments(beta: Fraction) -> list[tuple[int, int, int, int]]:
    """Matrices g in SL_2(Z) with {oo, beta} = sum g{0, oo} (continued fractions)."""
    beta = Fraction(beta)
    u, v = beta.numerator, beta.denominator
    out = []
    p2, q2, p1, q1 = 0, 1, 1, 0  # p_{-2}, q_{-2}, p_{-1}, q_{-1}
    j = 0
    num, den = u, v
    while den:
        a = num // den
        num, den = den, num - a * den
        p0, q0 = a * p1 + p2, a * q1 + q2
        # segment from p_{j-1}/q_{j-1} to p_j/q_j; det = (-1)^(j-1)
        if j % 2 == 1:
            out.append((p0, p1, q0, q1))
        else:
            out.append((-p0, p1, -q0, q1))
        p2, q2, p1, q1 = p1, q1, p0, q0
        j += 1
    return out


class ManinSymbolSpace:
    """The quotient of formal Manin symbols by the two- and three-term relations.

    Generator ``g = j * len(P1) + i`` stands for [X^j Y^(w-j), P1[i]].
    """

    def __init__(self, N: int, k: int, limit: int = RESOURCE_LIMIT):
        if N < 1 or k < 2:
            raise ValueError("need N >= 1 and k >= 2")
        if N * k > limit:
            raise ResourceLimit(f"N*k = {N * k} exceeds the configured limit {limit}")
        self.N, self.k, self.w = N, k, k - 2
        self.P1 = P1List(N)
        self.ngens = (self.w + 1) * len(self.P1)
        self._build_quotient()
        self._hecke_cache: dict[int, list[list[Fraction]]] = {}

    # -- generators and the right action -------------------------------------
    def gen(self, j: int, c: int, d: int) -> int:
        i = self.P1.index(c, d)
        if i < 0:
            return -1
        return j * len(self.P1) + i

    def gen_info(self, g: int) -> tuple[int, int, int]:
        n1 = len(self.P1)
        c, d = self.P1.reps[g % n1]
        return g // n1, c, d

    def act(self, g: int, h: tuple[int, int, int, int], out: dict | None = None, scale=1) -> dict:
        """Accumulate scale * (generator g) . h into ``out`` (gen -> coefficient)."""
        out = {} if out is None else out
        j, c, d = self.gen_info(g)
        a, b, cc, dd = h
        idx = self.P1.index(c * a + d * cc, c * b + d * dd)
        if idx < 0:
            return out
        mono = [0] * (self.w + 1)
        mono[j] = 1
        poly = poly_substitute(mono, a, b, cc, dd)
        n1 = len(self.P1)
        for t, v in enumerate(poly):
            if v:
                key = t * n1 + idx
                out[key] = out.get(key, 0) + scale * v
        return out

    def _build_quotient(self):
        sigma = (0, -1, 1, 0)
        tau = (0, -1, 1, -1)
        tau2 = (-1, 1, -1, 0)
        J = (-1, 0, 0, -1)
        rows = []
        for g in range(self.ngens):
            r = {g: 1}
            self.act(g, sigma, r)
            rows.append(r)
            r = {g: 1}
            self.act(g, tau, r)
            self.act(g, tau2, r)
            rows.append(r)
            r = {g: 1}
            self.act(g, J, r, scale=-1)
            rows.append(r)
        rows = [{c: v for c, v in r.items() if v} for r in rows]
        basis, pivots = echelon(r for r in rows if r)
        pivset = set(pivots)
        self.free = [g for g in range(self.ngens) if g not in pivset]
        pos = {g: i for i, g in enumerate(self.free)}
        coords: list[dict[int, Fraction]] = [dict() for _ in range(self.ngens)]
        for g in self.free:
            coords[g] = {pos[g]: Fraction(1)}
        for b, pc in zip(basis, pivots):
            pv = b[pc]
            coords[pc] = {pos[c]: Fraction(-v, pv) for c, v in b.items() if c != pc}
        self.coords = coords

    @property
    def dim(self) -> int:
        return len(self.free)

    def reduce(self, formal: Mapping[int, object]) -> list[Fraction]:
        """Quotient coordinates of a formal combination of generators."""
        out = [Fraction(0)] * self.dim
        for g, v in formal.items():
            if v:
                for i, cv in self.coords[g].items():
                    out[i] += cv * v
        return out

    # -- boundary map and cuspidal subspace -----------------------------------
    def _lift(self, c: int, d: int) -> tuple[int, int, int, int]:
        """A matrix in SL_2(Z) whose bottom row is congruent to (c, d) mod N."""
        N = self.N
        c %= N
        d %= N
        if c == 0:
            c = N
        t = 0
        while math.gcd(c, d + t * N) != 1:
            t += 1
        d = d + t * N
        g, x, y = xgcd(d, -c)  # d x - c y = 1
        return x, y, c, d

    def _cusp_key(self, u: int, v: int) -> tuple[int, int]:
        g = math.gcd(u, v)
        u, v = u // g, v // g
        if v < 0 or (v == 0 and u < 0):
            u, v = -u, -v
        return u, v

    def _cusp_equiv(self, c1, c2) -> bool:
        (u1, v1), (u2, v2) = c1, c2
        s1 = xgcd(u1, v1)[1]
        s2 = xgcd(u2, v2)[1]
        m = math.gcd(v1 * v2, self.N)
        return (s1 * v2 - s2 * v1) % m == 0

    @cached_property
    def boundary(self) -> tuple[list[dict[int, int]], list[tuple[int, int]]]:
        """Rows (one per cusp class) of the boundary map on quotient basis."""
        cusps: list[tuple[int, int]] = []

        def cls(u, v):
            key = self._cusp_key(u, v)
            for i, c in enumerate(cusps):
                if self._cusp_equiv(key, c):
                    return i
            cusps.append(key)
            return len(cusps) - 1

        entries: dict[tuple[int, int], int] = {}
        for col, g in enumerate(self.free):
            j, c, d = self.gen_info(g)
            a, b, cc, dd = self._lift(c, d)
            if j == self.w:
                key = (cls(a, cc), col)
                entries[key] = entries.get(key, 0) + 1
            if j == 0:
                key = (cls(b, dd), col)
                entries[key] = entries.get(key, 0) - 1
        rows = [dict() for _ in cusps]
        for (r, col), v in entries.items():
            if v:
                rows[r][col] = v
        return rows, cusps

    @cached_property
    def cuspidal_basis(self) -> list[list[int]]:
        rows, _ = self.boundary
        return kernel([r for r in rows if r], self.dim)

    @property
    def cuspidal_dim(self) -> int:
        return len(self.cuspidal_basis)

    # -- operators on the full quotient ---------------------------------------
    def hecke_full(self, n: int) -> list[list[Fraction]]:
        """Matrix of T_n on the quotient: column i is T_n applied to basis i."""
        if n not in self._hecke_cache:
            if n == 1:
                mat = [[Fraction(int(i == j)) for j in range(self.dim)] for i in range(self.dim)]
            else:
                cols = []
                hs = hecke_set(n)
                for g in self.free:
                    formal: dict[int, int] = {}
                    for h in hs:
                        self.act(g, h, formal)
                    cols.append(self.reduce(formal))
                mat = [list(r) for r in zip(*cols)]
            self._hecke_cache[n] = mat
        return self._hecke_cache[n]

    def apply_hecke_to_gen(self, n: int, g: int) -> dict[int, int]:
        """Formal image of one generator under T_n (Merel's action)."""
        formal: dict[int, int] = {}
        for h in hecke_set(n):
            self.act(g, h, formal)
        return formal

    def star_gen(self, g: int) -> dict[int, int]:
        """iota [X^j Y^(w-j), (c:d)] = (-1)^(w-j) [X^j Y^(w-j), (-c:d)]."""
        j, c, d = self.gen_info(g)
        return {self.gen(j, -c, d): (-1) ** (self.w - j)}

    @cached_property
    def star_full(self) -> list[list[Fraction]]:
        cols = [self.reduce(self.star_gen(g)) for g in self.free]
        return [list(r) for r in zip(*cols)]

    # -- symbol evaluation helpers -------------------------------------------
    def manin_formal(self, poly: Sequence[int], g: tuple[int, int, int, int], out: dict, scale=1):
        """Add scale * (poly {g0, g oo}) = scale * [g^{-1} poly, (c:d)] to ``out``."""
        a, b, c, d = g
        q = poly_substitute(poly, a, b, c, d)
        idx = self.P1.index(c, d)
        n1 = len(self.P1)
        for t, v in enumerate(q):
            if v:
                key = t * n1 + idx
                out[key] = out.get(key, 0) + scale * v
        return out

    def path_formal(self, poly: Sequence[int], alpha, beta) -> dict[int, int]:
        """Formal Manin-symbol expansion of poly{alpha, beta}; cusps are Fractions or None (oo)."""
        out: dict[int, int] = {}
        if beta is not None:
            for g in unimodular_segments(Fraction(beta)):
                self.manin_formal(poly, g, out)
        if alpha is not None:
            for g in unimodular_segments(Fraction(alpha)):
                self.manin_formal(poly, g, out, scale=-1)
        return out


def build_space(N: int, k: int, limit: int = RESOURCE_LIMIT) -> ManinSymbolSpace:
    return ManinSymbolSpace(N, k, limit)


def _restrict(space: ManinSymbolSpace, mat: list[list[Fraction]]) -> list[list[Fraction]]:
    """Matrix of an operator preserving the cuspidal subspace, in its basis."""
    B = space.cuspidal_basis
    d = len(B)
    cols = []
    for v in B:
        img = [sum((mat[i][j] * v[j] for j in range(space.dim) if v[j]), Fraction(0)) for i in range(space.dim)]
        cols.append(solve_in_span(B, img))
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def hecke_matrix(space: ManinSymbolSpace, n: int) -> list[list[Fraction]]:
    """Matrix of T_n on the cuspidal subspace (in ``space.cuspidal_basis``)."""
    if n < 1:
        raise ValueError("Hecke index must be >= 1")
    return _restrict(space, space.hecke_full(n))


def star_involution(space: ManinSymbolSpace) -> list[list[Fraction]]:
    """Matrix of iota on the cuspidal subspace."""
    return _restrict(space, space.star_full)


@dataclass
class SymbolVector:
    """A linear functional on the symbol space, stored by its values on the quotient basis.

    The modular symbol of an eigenform is such a functional: evaluation on a
    path symbol is the period integral up to a fixed complex period.
    """

    space: ManinSymbolSpace
    coords: list[Fraction]
    sign: int = 0
    eigenvalues: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.coords) != self.space.dim:
            raise ValueError("coordinate length must equal the quotient dimension")

    @cached_property
    def gen_values(self) -> list[Fraction]:
        """Value on every formal Manin generator."""
        out = []
        for cd in self.space.coords:
            x = sum((v * self.coords[i] for i, v in cd.items()), Fraction(0))
            out.append(int(x) if x.denominator == 1 else x)
        return out

    def __call__(self, formal: Mapping[int, object]) -> Fraction:
        gv = self.gen_values
        return Fraction(sum(gv[g] * v for g, v in formal.items() if v))

    def scaled(self, s) -> "SymbolVector":
        s = Fraction(s)
        return SymbolVector(self.space, [c * s for c in self.coords], self.sign, dict(self.eigenvalues))


def _dual_rows(mat: list[list[Fraction]], eig) -> list[dict[int, int]]:
    """Rows of (mat^T - eig) acting on functionals."""
    n = len(mat)
    rows = []
    for j in range(n):
        rows.append(integral_row([(i, mat[i][j] - (eig if i == j else 0)) for i in range(n)]))
    return [r for r in rows if r]


def cuspidal_eigen_symbol(
    space: ManinSymbolSpace, eigenvalues: Mapping[int, int], sign: int
) -> SymbolVector:
    """The eigen-functional with T_l eigenvalue a_l (l prime to N) and iota-eigenvalue ``sign``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if space.cuspidal_dim == 0:
        raise AmbiguousEigensystem("the cuspidal subspace is zero")
    rows = _dual_rows(space.star_full, sign)
    for ell in sorted(eigenvalues):
        if space.N % ell == 0:
            continue
        rows += _dual_rows(space.hecke_full(ell), Fraction(eigenvalues[ell]))
    sol = kernel(rows, space.dim)
    if len(sol) != 1:
        raise AmbiguousEigensystem(f"joint eigenspace has dimension {len(sol)}")
    vec = SymbolVector(space, [Fraction(x) for x in sol[0]], sign, dict(eigenvalues))
    # must not vanish on cusp forms (rules out Eisenstein eigensystems)
    if not any(sum(Fraction(b[i]) * vec.coords[i] for i in range(space.dim)) for b in space.cuspidal_basis):
        raise AmbiguousEigensystem("eigensystem is Eisenstein")
    return vec


def auto_eigenvalues(space: ManinSymbolSpace, bound: int = 20, sign: int = 1) -> dict[int, int]:
    """Eigenvalues of the unique newform whose sign-part cuspidal space is one-dimensional."""
    B = space.cuspidal_basis
    star = star_involution(space)
    d = len(B)
    # vectors v (in cuspidal coordinates) with star v = sign v
    rows = [integral_row([(j, star[i][j] - (sign if i == j else 0)) for j in range(d)]) for i in range(d)]
    sol = kernel([r for r in rows if r], d)
    if len(sol) != 1:
        raise AmbiguousEigensystem(f"{'+' if sign > 0 else '-'} cuspidal part has dimension {len(sol)}; pin eigenvalues")
    v = sol[0]
    out = {}
    from .arith import primes_up_to

    for ell in primes_up_to(bound):
        if space.N % ell == 0:
            continue
        T = hecke_matrix(space, ell)
        img = [sum(Fraction(T[i][j]) * v[j] for j in range(d)) for i in range(d)]
        lead = next(i for i in range(d) if v[i])
        a = img[lead] / v[lead]
        if a.denominator != 1:
            raise NonRational(f"T_{ell} eigenvalue {a} is not an integer")
        out[ell] = int(a)
    return out


def pair_path(v: SymbolVector, poly: Sequence[int], alpha, beta) -> Fraction:
    """v(poly{alpha, beta}); cusps are rationals or ``None`` for oo."""
    return v(v.space.path_formal(poly, alpha, beta))


def evaluate_path(v: SymbolVector, alpha, beta) -> list[Fraction]:
    """The Sym^{k-2}-valued symbol on {alpha -> beta}: coefficient of X^j Y^(w-j)
    is binom(w, j) times the pairing with the monomial X^j Y^(w-j)."""
    w = v.space.w
    out = []
    for j in range(w + 1):
        mono = [0] * (w + 1)
        mono[j] = 1
        out.append(math.comb(w, j) * pair_path(v, mono, alpha, beta))
    return out
