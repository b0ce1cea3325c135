"""Exact sparse linear algebra over Q.

Rows are ``dict[int, int]`` (column -> integer entry).  Elimination is
fraction-free: a row is updated as ``piv * row - row[c] * pivot_row`` and then
divided by its content, so entries stay integral and bit growth is checked by
the content reduction.  Pivots are chosen with the smallest absolute value
among the candidate rows (ties broken by fewest nonzeros).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .arith import content_normalize

Row = dict


def _primitive(row: Row) -> Row:
    g = reduce(math.gcd, row.values(), 0)
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def integral_row(values: Iterable[tuple[int, object]]) -> Row:
    """Clear denominators of a sparse rational row."""
    fr = {c: Fraction(v) for c, v in values if v}
    if not fr:
        return {}
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (v.denominator for v in fr.values()), 1)
    return _primitive({c: int(v * den) for c, v in fr.items()})


def echelon(rows: Iterable[Row]) -> tuple[list[Row], list[int]]:
    """Reduced (Gauss-Jordan) form of the row space.

    Returns ``(basis, pivots)`` where ``basis[i]`` has a nonzero entry at
    ``pivots[i]`` and zero at every other pivot column.
    """
    pending = [_primitive(dict(r)) for r in rows if r]
    pending = [r for r in pending if r]
    basis: list[Row] = []
    pivots: list[int] = []
    while pending:
        # pick the column of smallest index present, then the lightest row
        col = min(min(r) for r in pending)
        cands = [i for i, r in enumerate(pending) if col in r]
        best = min(cands, key=lambda i: (abs(pending[i][col]), len(pending[i])))
        prow = pending.pop(best)
        pv = prow[col]
        nxt = []
        for r in pending:
            if col in r:
                r = _combine(r, prow, col, pv)
            if r:
                nxt.append(r)
        pending = nxt
        for i, b in enumerate(basis):
            if col in b:
                basis[i] = _combine(b, prow, col, pv)
        basis.append(prow)
        pivots.append(col)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [basis[i] for i in order], [pivots[i] for i in order]


def _combine(r: Row, prow: Row, col: int, pv: int) -> Row:
    a = r[col]
    g = math.gcd(a, pv)
    s, t = pv // g, a // g
    out = {c: s * v for c, v in r.items()}
    for c, v in prow.items():
        nv = out.get(c, 0) - t * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return _primitive(out)


def kernel(rows: Iterable[Row], ncols: int) -> list[list[int]]:
    """Basis of {x : row . x = 0 for all rows}, as primitive integer vectors."""
    basis, pivots = echelon(rows)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for b, pc in zip(basis, pivots):
            if f in b:
                x[pc] = Fraction(-b[f], b[pc])
        out.append(content_normalize(x)[0])
    return out


def rank(rows: Iterable[Row]) -> int:
    return len(echelon(rows)[1])


def dense_to_rows(mat: Sequence[Sequence]) -> list[Row]:
    return [integral_row(enumerate(r)) for r in mat]


def transpose(mat: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*mat)] if mat else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def solve_in_span(basis: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    """Coordinates of ``v`` in the span of the given (independent) columns vectors."""
    n = len(basis)
    rows = []
    # unknown c_0..c_{n-1}, augmented column n
    for i in range(len(v)):
        rows.append(integral_row([(j, basis[j][i]) for j in range(n)] + [(n, -Fraction(v[i]))]))
    sol = kernel([r for r in rows if r], n + 1)
    for s in sol:
        if s[n]:
            return [Fraction(s[j], s[n]) for j in range(n)]
    raise ValueError("vector is not in the span")
