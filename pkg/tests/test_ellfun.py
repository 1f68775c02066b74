"""AGM elliptic integrals against quadrature oracles; the ratio v(s)."""

import random
from fractions import Fraction

import mpmath
import pytest

from s4cycles.ellfun import agm_KE, eval_IJ, eval_v, quad_IJ, quad_KE, r_of_s


def test_KE_at_zero():
    K, E = agm_KE(0, 128)
    with mpmath.workprec(160):
        assert abs(K - mpmath.pi / 2) < mpmath.mpf(2) ** -120
        assert abs(E - mpmath.pi / 2) < mpmath.mpf(2) ** -120


def test_KE_matches_quadrature_at_half():
    K, E = agm_KE(Fraction(1, 2), 160)
    Kq, Eq = quad_KE(Fraction(1, 2), 160)
    with mpmath.workprec(200):
        assert abs(K - Kq) < mpmath.mpf("1e-30")
        assert abs(E - Eq) < mpmath.mpf("1e-30")


def test_K_log_asymptotics_near_one():
    # K(m) ~ (1/2) log(16/(1-m)) as m -> 1
    m = mpmath.mpf(1) - mpmath.mpf("1e-10")
    K, _ = agm_KE(m, 192)
    with mpmath.workprec(220):
        approx = mpmath.log(16 / (1 - m)) / 2
        assert abs(K - approx) / approx < 1e-6


def test_K_domain_error():
    with pytest.raises(ValueError):
        agm_KE(1)
    with pytest.raises(ValueError):
        agm_KE(-0.25)


def test_legendre_relation():
    rng = random.Random(42)
    with mpmath.workprec(200):
        for _ in range(50):
            m = mpmath.mpf(rng.random()) * mpmath.mpf("0.98") + mpmath.mpf("0.01")
            K, E = agm_KE(m, 160)
            K1, E1 = agm_KE(1 - m, 160)
            lhs = E * K1 + E1 * K - K * K1
            assert abs(lhs - mpmath.pi / 2) < mpmath.mpf("1e-40")


def test_IJ_at_zero():
    pair = eval_IJ(0, 128)
    with mpmath.workprec(160):
        assert abs(pair.I - mpmath.pi) < mpmath.mpf(2) ** -120
        assert abs(pair.J - mpmath.pi) < mpmath.mpf(2) ** -120


def test_IJ_matches_quadrature_at_half():
    pair = eval_IJ(Fraction(1, 2), 160)
    Iq, Jq = quad_IJ(Fraction(1, 2), 160)
    with mpmath.workprec(200):
        assert abs(pair.I - Iq) < mpmath.mpf("1e-25")
        assert abs(pair.J - Jq) < mpmath.mpf("1e-25")


def test_IJ_near_one_finite_and_cauchy_schwarz():
    pair = eval_IJ(0.99, 160)
    assert pair.J > pair.I > 0
    with mpmath.workprec(200):
        assert pair.I * pair.J >= mpmath.pi ** 2


def test_IJ_domain_error():
    with pytest.raises(ValueError):
        eval_IJ(1)


def test_IJ_closed_forms_match_quadrature_grid():
    # 40-point spot grid here (the dense 200-point sweep is exercised in the
    # acceptance suite); closed form vs theta-integral quadrature
    with mpmath.workprec(200):
        for i in range(40):
            r = (mpmath.mpf(i) + mpmath.mpf("0.5")) / 41
            pair = eval_IJ(r, 160)
            Iq, Jq = quad_IJ(r, 160)
            assert abs(pair.I - Iq) < mpmath.mpf("1e-35")
            assert abs(pair.J - Jq) < mpmath.mpf("1e-35")


def test_v_endpoint_limit():
    with mpmath.workprec(300):
        s = mpmath.sqrt(2) - 1 + mpmath.mpf("1e-12")
        v = eval_v(s, 256)
        assert abs(v - 1) < mpmath.mpf("1e-20")


def test_v_greater_than_one_inside():
    with mpmath.workprec(200):
        left = mpmath.sqrt(2) - 1
        for i in range(1, 50):
            s = left + (1 - left) * mpmath.mpf(i) / 50
            assert eval_v(s, 128) > 1


def test_v_quartic_expansion_leading_terms():
    # v(s) = 1 + (3+2sqrt2)/2 d^2 - (4+3sqrt2)/4 d^3 + (103+72sqrt2)/32 d^4 + O(d^5)
    with mpmath.workprec(700):
        s2 = mpmath.sqrt(2)
        d = mpmath.mpf("1e-3")
        v = eval_v(s2 - 1 + d, 640)
        c2 = (3 + 2 * s2) / 2
        c3 = -(4 + 3 * s2) / 4
        c4 = (103 + 72 * s2) / 32
        c2_est = (v - 1) / d ** 2
        assert abs(c2_est - c2) / c2 < 2 * d  # error O(d) from the d^3 term
        c3_est = (v - 1 - c2 * d ** 2) / d ** 3
        assert abs(c3_est - c3) / abs(c3) < 1e-2
        c4_est = (v - 1 - c2 * d ** 2 - c3 * d ** 3) / d ** 4
        assert abs(c4_est - c4) / c4 < 1e-2


def test_v_derivative_matches_riccati_right_side():
    # dv/ds = ((1+s^2)^4 - 32 s^2 (1-s^2)^2 v + 16 s^2 (1-s^2)^2 v^2)
    #         / (2 s (-1+s^4)(1-6 s^2+s^4)), checked by central differences
    with mpmath.workprec(400):
        s = mpmath.mpf("0.7")
        h = mpmath.mpf("1e-30")
        dv = (eval_v(s + h, 360) - eval_v(s - h, 360)) / (2 * h)
        v = eval_v(s, 360)
        num = (1 + s ** 2) ** 4 - 32 * s ** 2 * (1 - s ** 2) ** 2 * v \
            + 16 * s ** 2 * (1 - s ** 2) ** 2 * v ** 2
        den = 2 * s * (-1 + s ** 4) * (1 - 6 * s ** 2 + s ** 4)
        rhs = num / den
        assert abs(dv - rhs) / abs(rhs) < mpmath.mpf("1e-15")


def test_v_domain_error():
    with pytest.raises(ValueError):
        eval_v(0.3)
    with pytest.raises(ValueError):
        eval_v(1.0)


def test_r_of_s_endpoints():
    with mpmath.workprec(200):
        assert abs(r_of_s(1, 160) - 1) < mpmath.mpf("1e-45")
        assert abs(r_of_s(mpmath.sqrt(2) - 1, 160)) < mpmath.mpf("1e-45")
