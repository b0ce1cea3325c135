import logging

import mpmath
import pytest

from iwtheta.analytic import FloatContext, cubic_roots, dirichlet_coefficients, lvalue_rank0, real_period
from iwtheta.eigenform import CurveModel, count_points, period_integral, resolve
from iwtheta.errors import PrecisionUnreachable

from conftest import CURVE_11A, CURVE_37A
from oracles import quadrature_period

CURVE_14A = CurveModel((1, 0, 1, 4, -6), 14, "14a1")
CURVE_389A = CurveModel((0, 1, 1, -2, 0), 389, "389a1")


@pytest.mark.parametrize("curve", [CURVE_11A, CURVE_37A, CURVE_14A])
def test_period_matches_quadrature(curve):
    with mpmath.workdps(50):
        assert abs(real_period(curve) - quadrature_period(curve)) < mpmath.mpf(10) ** -20


def test_known_periods():
    assert abs(real_period(CURVE_11A) - mpmath.mpf("1.26920930427955")) < 1e-13
    assert abs(real_period(CURVE_37A) - mpmath.mpf("5.98691729246392")) < 1e-13


def test_scaled_model_halves_the_period():
    # u = 2 change of variables multiplies the invariant differential by 1/2
    scaled = CurveModel((0, -4, 8, -160, -1280), 11)
    with mpmath.workdps(50):
        assert abs(real_period(scaled) * 2 - real_period(CURVE_11A)) < mpmath.mpf(10) ** -40


def test_cubic_roots_split():
    real, cplx = cubic_roots(CURVE_37A)
    assert len(real) == 3 and real == sorted(real, reverse=True) and not cplx
    real, cplx = cubic_roots(CURVE_11A)
    assert len(real) == 1 and len(cplx) == 2


def test_dirichlet_coefficients_multiplicative():
    a = dirichlet_coefficients(CURVE_11A, 60)
    assert a[1] == 1 and a[2] == -2 and a[4] == 2 and a[11] == 1 and a[22] == -2
    for m, n in [(2, 3), (4, 5), (3, 7)]:
        assert a[m * n] == a[m] * a[n]
    assert a[13] == 14 - count_points(CURVE_11A.ainvs, 13)


def test_bsd_ratio_for_11a():
    L = lvalue_rank0(CURVE_11A)
    assert L.epsilon == 1
    with mpmath.workdps(50):
        assert abs(L.value / real_period(CURVE_11A) - mpmath.mpf(1) / 5) < mpmath.mpf(10) ** -40


def test_precision_guard():
    with pytest.raises(PrecisionUnreachable):
        lvalue_rank0(CURVE_11A, ctx=FloatContext(max_terms=5))
    with pytest.raises(ValueError):
        FloatContext(digits=10)


def test_fricke_check_is_logged(caplog):
    with caplog.at_level(logging.INFO, logger="iwtheta.analytic"):
        lvalue_rank0(CURVE_37A)
    assert any("skipped" in r.message for r in caplog.records)


@pytest.mark.parametrize("curve,eps", [(CURVE_11A, 1), (CURVE_37A, -1), (CURVE_14A, 1), (CURVE_389A, 1)])
def test_exact_and_analytic_vanishing_agree(curve, eps):
    nes = resolve(curve)
    L = lvalue_rank0(curve)
    assert L.epsilon == eps
    exact_zero = period_integral(nes, 1, 0, 1, 1) == 0
    assert exact_zero == (abs(L.value) < 1e-8)
