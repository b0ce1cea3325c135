import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwtheta.arith import (
    LogTable,
    ModRing,
    PrimeTable,
    TruncPoly,
    content_normalize,
    discrete_log,
    euler_phi,
    hensel_unit_root,
    multiplicative_order,
    primitive_root,
    primes_up_to,
    teichmuller,
    units_mod,
)
from iwtheta.errors import NotOrdinary, NotPrime, NotPrimitiveRoot, NotUnit, ZeroVector

from oracles import brute_log

SMALL_PRIMES = [p for p in primes_up_to(400) if p > 2]


def test_mod_ring_reduces_rationals():
    R = ModRing(7, 2)
    assert R.modulus == 49
    assert R(Fraction(1, 3)) * 3 % 49 == 1
    assert R(-1) == 48
    with pytest.raises(NotUnit):
        R(Fraction(1, 7))


@pytest.mark.parametrize("bad", [2, 9, 1])
def test_mod_ring_needs_odd_prime(bad):
    with pytest.raises(NotPrime):
        ModRing(bad)


def test_units_and_phi():
    assert units_mod(1) == (0,)
    assert units_mod(10) == (1, 3, 7, 9)
    assert [euler_phi(n) for n in (1, 9, 12, 49)] == [1, 6, 4, 42]


def test_primitive_roots_small():
    assert primitive_root(7) == 3
    assert primitive_root(113) == 3
    assert multiplicative_order(2, 7) == 3
    with pytest.raises(NotPrime):
        primitive_root(15)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_PRIMES), st.data())
def test_bsgs_matches_brute_force(ell, data):
    eta = primitive_root(ell)
    a = data.draw(st.integers(1, ell - 1))
    assert discrete_log(a, eta, ell) == brute_log(a, eta, ell)


def test_log_table_switches_to_full_table():
    T = LogTable(101)
    logs = [T(a) for a in range(1, 101)]
    assert T._full is not None
    assert logs == [brute_log(a, T.eta, 101) for a in range(1, 101)]
    with pytest.raises(NotUnit):
        T(0)


def test_log_table_rejects_non_generator():
    with pytest.raises(NotPrime):
        LogTable(7, 2).full_table()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 4), st.integers(1, 10**6))
def test_teichmuller_is_root_of_unity(p, M, a):
    if a % p == 0:
        a += 1
    R = ModRing(p, M)
    w = teichmuller(a, R)
    assert w % p == a % p
    assert pow(w, p - 1, R.modulus) == 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 6), st.integers(-50, 50), st.sampled_from([2, 4, 12]))
def test_hensel_root_solves_quadratic(p, M, a_p, k):
    R = ModRing(p, M)
    if a_p % p == 0:
        with pytest.raises(NotOrdinary):
            hensel_unit_root(a_p, R, k)
        return
    alpha = hensel_unit_root(a_p, R, k)
    assert (alpha * alpha - a_p * alpha + p ** (k - 1)) % R.modulus == 0
    assert alpha % p == a_p % p


def test_unit_root_for_11a_at_7():
    # a_7 = -2 for 11a; the unit root is congruent to -2 mod 7
    alpha = hensel_unit_root(-2, ModRing(7, 5))
    assert alpha % 7 == 5
    assert (alpha**2 + 2 * alpha + 7) % 7**5 == 0


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=8))
def test_content_normalize_is_primitive(v):
    if not any(v):
        with pytest.raises(ZeroVector):
            content_normalize(v)
        return
    w, s = content_normalize(v)
    assert [Fraction(x) for x in w] == [s * x for x in v]
    assert math.gcd(*w) == 1
    assert next(x for x in w if x) > 0


def test_prime_table_overrides():
    T = PrimeTable(50, {13: 6})
    assert T.root(13) == 6 and T.root(11) == 2
    assert T.log(13)(6) == 1
    with pytest.raises(NotPrimitiveRoot):
        PrimeTable(50, {13: 3})


def test_truncpoly_relation_and_gen_order():
    R = ModRing(5, 3)
    X = TruncPoly.gen(R, 2) - TruncPoly.one(R, 2)
    g = TruncPoly.gen(R, 2)
    assert g ** 25 == TruncPoly.one(R, 2)
    assert (X ** 3).coeffs[:4] == (0, 0, 0, 1)
    assert X.x_valuation_mod_p() == 1
    assert TruncPoly(R, 2).x_valuation_mod_p() == math.inf


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=9), st.integers(0, 8))
def test_group_coeffs_match_powers_of_gen(c, shift):
    R = ModRing(3, 2)
    n = 2
    P = TruncPoly.from_group_coeffs(R, n, c)
    g = TruncPoly.gen(R, n)
    direct = TruncPoly(R, n)
    for e, x in enumerate(c):
        direct = direct + (g**e) * x
    assert P == direct
    # multiplying by the generator rotates the group coefficients
    rot = [0] * 9
    for e, x in enumerate(c):
        rot[(e + shift) % 9] += x
    assert P * g**shift == TruncPoly.from_group_coeffs(R, n, rot)


def test_reduce_level_is_ring_map():
    R = ModRing(3, 3)
    a = TruncPoly.from_group_coeffs(R, 2, [1, 4, 0, 2, 0, 0, 7, 1, 1])
    b = TruncPoly.from_group_coeffs(R, 2, [2, 0, 5])
    assert (a * b).reduce_level(1) == a.reduce_level(1) * b.reduce_level(1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 6), st.integers(-40, 40))
def test_unit_root_cofactor(p, M, a_p):
    if a_p % p == 0:
        return
    R = ModRing(p, M)
    alpha = hensel_unit_root(a_p, R)
    assert alpha * (a_p - alpha) % R.modulus == p % R.modulus


@given(st.lists(st.integers(-100, 100), min_size=1, max_size=6).filter(any))
def test_content_normalize_idempotent(v):
    w, _ = content_normalize(v)
    assert content_normalize(w) == (w, Fraction(1))


@settings(max_examples=30, deadline=None)
@given(*[st.lists(st.integers(0, 124), min_size=5, max_size=5)] * 3)
def test_truncpoly_ring_axioms(a, b, c):
    R = ModRing(5, 3)
    A, B, C = (TruncPoly(R, 1, x) for x in (a, b, c))
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
