import numpy as np
import pytest

from iwtheta.arith import PrimeTable, primitive_root
from iwtheta.errors import BadPrime, NotKolyvagin, NotPrimitiveRoot, NotSquareFree
from iwtheta.groupring import GroupRingElement
from iwtheta.kurihara import (
    ExhaustionReport,
    KuriharaCertificate,
    SearchStrategy,
    derivative_operator,
    euler_factor_mod_p,
    kolyvagin_primes,
    kurihara_number,
    leading_coeff_check,
    replay,
    search_delta,
)
from iwtheta.mazurtate import theta

from conftest import CURVE_11A

FIRST_FIVE = [113, 379, 701, 1051, 2437]


@pytest.fixture(scope="module")
def kp(e11):
    return kolyvagin_primes(e11, 7, 2500)


def test_first_kolyvagin_primes(kp):
    assert [q.ell for q in kp] == FIRST_FIVE
    assert all(q.ell % 7 == 1 and (q.a_ell - q.ell - 1) % 7 == 0 for q in kp)
    assert [q.index for q in kp] == [1, 1, 1, 1, 1]


def test_point_count_and_symbol_sources_agree(e11, kp):
    table = {}
    from_curve = kolyvagin_primes(CURVE_11A, 7, 2500, a_table=table)
    assert from_curve == kp
    assert table[113] == kp[0].a_ell


def test_prime_guards(e11):
    with pytest.raises(BadPrime):
        kolyvagin_primes(e11, 11, 100)
    with pytest.raises(BadPrime):
        kurihara_number(e11, 2, 1, [])


def test_euler_factor():
    # 1 - a_7/7 + 1/7 with a_7 = -2, times 7
    assert euler_factor_mod_p(-2, 7, 2, 1) == 3
    # weight 12 at the centre: 5^6 (1 + 24/5^6 + 1/5) = 5^6 + 24 + 5^5
    assert euler_factor_mod_p(-24, 5, 12, 6) == (5**6 + 24 + 5**5) % 5


def test_empty_product_is_central_value(e11):
    cert = kurihara_number(e11, 7, 1, [])
    assert cert.m == 1 and cert.value == int(theta(e11, 1).coeff(0)) % 7 == 3
    assert cert.euler_factor == 3


def test_factor_validation(e11):
    with pytest.raises(NotKolyvagin):
        kurihara_number(e11, 7, 1, [(29, 2)])
    with pytest.raises(NotPrimitiveRoot):
        kurihara_number(e11, 7, 1, [(113, 1)])
    with pytest.raises(NotSquareFree):
        kurihara_number(e11, 7, 1, [(113, 3), (113, 3)])


def test_derivative_operator_identity():
    ell = 29
    eta = primitive_root(ell)
    D = derivative_operator([(ell, eta)])
    s = GroupRingElement.sigma(eta, ell)
    one = GroupRingElement.sigma(1, ell)
    tr = GroupRingElement(ell, {a: 1 for a in range(1, ell)})
    assert (s - one) * D == one.scale(ell - 1) - tr


def test_delta_is_pairing_with_derivative(e11, kp):
    pair = [(q.ell, q.eta) for q in kp[:1]]
    D = derivative_operator(pair)
    th = theta(e11, 113).element
    direct = sum(int(D.coeff(a)) * int(th.coeff(a)) for a in range(113)) % 7
    assert kurihara_number(e11, 7, 1, pair).value == direct


def test_leading_coefficient_one_prime(e11, kp):
    rep = leading_coeff_check(e11, 7, 1, kp[:1])
    assert rep.lower_terms_vanish and rep.matches_delta


def test_primitive_root_covariance(e11, kp):
    ell = kp[0].ell
    eta = kp[0].eta
    base = kurihara_number(e11, 7, 1, [(ell, eta)]).value
    for u in (5, 11, 13):
        if np.gcd(u, ell - 1) != 1:
            continue
        moved = kurihara_number(e11, 7, 1, [(ell, pow(eta, u, ell))]).value
        assert moved == base * pow(u, -1, 7) % 7


def test_replay_detects_tampering(e11, kp):
    cert = kurihara_number(e11, 7, 1, [kp[0]], seed=4)
    assert replay(cert, e11)
    forged = KuriharaCertificate(**{**cert.__dict__, "value": (cert.value + 1) % 7})
    assert not replay(forged, e11)
    assert not replay(cert, e11.rescaled(2))


def test_search_order_and_budget(e11, kp):
    got = search_delta(e11, 7, 1, 0, SearchStrategy(max_factors=1, prime_bound=500), kp)
    assert isinstance(got, KuriharaCertificate) and got.m == 1 and got.nonzero
    none = search_delta(e11, 7, 1, 0, SearchStrategy(budget=0), kp)
    assert isinstance(none, ExhaustionReport) and none.trials == 0


def test_search_is_independent_of_jobs(e11, kp):
    s = SearchStrategy(max_factors=1, prime_bound=800, seed=3)
    a = search_delta(e11, 7, 1, 1, s, kp, jobs=1)
    b = search_delta(e11, 7, 1, 1, s, kp, jobs=2)
    assert type(a) is type(b)
    assert a.to_dict() == b.to_dict() if isinstance(a, KuriharaCertificate) else a.tried == b.tried


def test_prime_table_overrides_feed_etas(e11):
    t = PrimeTable(200, {113: 10})
    (q,) = kolyvagin_primes(e11, 7, 200, t)
    assert q.eta == 10


def test_derivative_identity_for_table_primes(kp):
    for q in kp:
        D = derivative_operator([(q.ell, q.eta)])
        s = GroupRingElement.sigma(q.eta, q.ell)
        one = GroupRingElement.sigma(1, q.ell)
        tr = GroupRingElement(q.ell, {a: 1 for a in range(1, q.ell)})
        assert (s - one) * D == one.scale(q.ell - 1) - tr
