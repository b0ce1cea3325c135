import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwtheta.arith import primes_up_to
from iwtheta.eigenform import (
    CurveModel,
    SymbolEigenform,
    count_points,
    eigenvalue,
    period_integral,
    period_integrals_mod,
    period_lambda,
    resolve,
)
from iwtheta.errors import ConductorMismatch, DegreeTooLarge, NotPrime, SingularCurve

from oracles import brute_points

coef = st.integers(-20, 20)


@settings(max_examples=60, deadline=None)
@given(st.tuples(coef, coef, coef, coef, coef), st.sampled_from(primes_up_to(60)))
def test_point_count_matches_brute_force(ainvs, ell):
    assert count_points(ainvs, ell) == brute_points(ainvs, ell)


def test_singular_model_rejected():
    with pytest.raises(SingularCurve):
        CurveModel((0, 0, 0, 0, 0), 1)


def test_discriminants():
    assert CurveModel((0, -1, 1, -10, -20), 11).discriminant == -(11**5)
    assert CurveModel((0, 0, 1, -1, 0), 37).discriminant == 37


def test_wrong_conductor_is_reported():
    with pytest.raises(ConductorMismatch):
        resolve(CurveModel((0, -1, 1, -10, -20), 37))


def test_eigenvalue_requires_prime(e11):
    with pytest.raises(NotPrime):
        eigenvalue(e11, 9, e11)


def test_lattice_values_are_primitive(e11, e37, delta):
    for nes in (e11, e37, delta):
        for s in (1, -1):
            v = nes.lattice_values(s)
            assert math.gcd(*v) == 1
            assert next(x for x in v if x) > 0


def test_delta_eigenvalues_are_tau(delta):
    tau = {2: -24, 3: 252, 5: 4830, 7: -16744, 11: 534612, 13: -577738}
    assert {p: delta.hecke_eigenvalue(p) for p in tau} == tau


def test_fingerprint_tracks_scale(e11):
    again = resolve(CurveModel((0, -1, 1, -10, -20), 11, "11a1"))
    assert again.fingerprint == e11.fingerprint
    assert e11.rescaled(Fraction(3, 5)).fingerprint != e11.fingerprint
    assert e11.rescaled(Fraction(3, 5)).rescaled(Fraction(5, 3)).fingerprint == e11.fingerprint


def test_rank_zero_and_rank_one_central_values(e11, e37):
    assert period_integral(e11, 1, 0, 1, 1) != 0
    assert period_integral(e37, 1, 0, 1, 1) == 0
    assert period_integral(e11, 1, 0, 1, -1) == 0


@pytest.mark.parametrize("m", [1, 2, 3, 7, 13, 20, 49])
def test_sign_symmetry_weight_two(e11, m):
    for a in range(m):
        assert period_integral(e11, 1, -a, m, 1) == period_integral(e11, 1, a, m, 1)
        assert period_integral(e11, 1, -a, m, -1) == -period_integral(e11, 1, a, m, -1)


@pytest.mark.parametrize("r", [1, 4, 6, 11])
def test_sign_symmetry_weight_twelve(delta, r):
    for a in range(1, 7):
        for s in (1, -1):
            assert period_integral(delta, r, -a, 7, s) == s * period_integral(delta, r, a, 7, s)


def test_unsigned_value_sums_both_parts(e37):
    for a in range(5):
        both = period_integral(e37, 1, a, 5, 1) + period_integral(e37, 1, a, 5, -1)
        assert both == period_lambda(e37, [1], a, 5) + period_lambda(e37, [1], -a, 5)


@pytest.mark.parametrize("m", [1, 5, 11, 24, 97, 343])
def test_bulk_path_agrees_with_symbols(e37, m):
    bulk = period_integrals_mod(e37, m)
    for s in (1, -1):
        slow = [period_integral(e37, 1, a, m, s) for a in range(m)]
        assert list(bulk[s]) == slow


def test_bulk_path_respects_rescaling(e11):
    x = e11.rescaled(Fraction(3, 5))
    v = period_integrals_mod(x, 13)
    w = period_integrals_mod(e11, 13)
    assert all(v[1][a] == Fraction(3, 5) * int(w[1][a]) for a in range(13))


def test_degree_guard(e11, delta):
    with pytest.raises(DegreeTooLarge):
        period_integral(e11, 2, 1, 3, 1)
    with pytest.raises(DegreeTooLarge):
        period_lambda(e11, [0, 1], 1, 3)
    with pytest.raises(DegreeTooLarge):
        period_integrals_mod(delta, 5, 12)


def test_integrality_of_weight_twelve(delta):
    vals = period_integrals_mod(delta, 11, 6)
    assert all(Fraction(x).denominator == 1 for s in (1, -1) for x in vals[s])


def test_pinned_symbol_form():
    f = SymbolEigenform(11, 2, {2: -2, 3: -1}, label="pinned")
    nes = resolve(f)
    assert nes.form_id == "pinned"
    assert nes.hecke_eigenvalue(5) == 1
    assert np.array_equal(np.array(nes.lattice_values(1)), np.array(resolve(CurveModel((0, -1, 1, -10, -20), 11)).lattice_values(1)))


def test_r1_values_depend_only_on_the_cusp(e37):
    for a, m in [(1, 3), (2, 5), (4, 9), (0, 1)]:
        for t in (2, 3, 7):
            for s in (1, -1):
                assert period_integral(e37, 1, t * a, t * m, s) == period_integral(e37, 1, a, m, s)


@pytest.mark.parametrize("r", [2, 5, 10])
def test_lambda_scaling_for_higher_r(delta, r):
    mono = [0] * (r - 1) + [1]
    for a, m in [(1, 3), (2, 5)]:
        for t in (2, 3):
            assert period_lambda(delta, mono, t * a, t * m) == t ** (r - 1) * period_lambda(delta, mono, a, m)


@pytest.mark.parametrize("m", [3, 7, 10])
def test_signed_parts_sum_to_twice_lambda(e11, m):
    for a in range(m):
        both = period_integral(e11, 1, a, m, 1) + period_integral(e11, 1, a, m, -1)
        assert both == 2 * period_lambda(e11, [1], a, m)


def test_normalisation_forgets_scalars():
    from iwtheta.eigenform import _normalize_part, optimal_normalize
    from iwtheta.modsym import build_space, cuspidal_eigen_symbol

    S = build_space(37, 2)
    eig = {2: -2, 3: -3, 5: -2, 7: -1}
    v = cuspidal_eigen_symbol(S, eig, 1)
    for c in (Fraction(-7, 3), Fraction(22), Fraction(1, 9)):
        assert _normalize_part(v.scaled(c))[0].gen_values == _normalize_part(v)[0].gen_values
    assert optimal_normalize(S, eig).fingerprint == resolve(CurveModel((0, 0, 1, -1, 0), 37)).fingerprint


def test_bad_prime_traces_from_point_counts():
    # a_l = l + 1 - #E(F_l) with the singular point counted: +1 split, -1 nonsplit
    assert 12 - count_points((0, -1, 1, -10, -20), 11) == 1
    assert 38 - count_points((0, 0, 1, -1, 0), 37) == -1
    assert 3 - count_points((1, 0, 1, 4, -6), 2) == -1
    assert 8 - count_points((1, 0, 1, 4, -6), 7) == 1
