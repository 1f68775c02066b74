"""Averaged-function pipeline: coefficient maps, closed forms vs quadrature,
Taylor independence, zero design, inversion round-trips."""

import random
from fractions import Fraction

import mpmath
import pytest

from s4cycles.averaging import (
    ConditioningError,
    KVector,
    PerturbCoeffs,
    PiPoly,
    averaged_quadrature,
    design_zeros,
    eval_f,
    eval_f_basis,
    eval_g_basis,
    f_basis_series,
    F_from_G_identity_check,
    jacobian_check,
    k_from_perturbation,
    perturbation_from_k,
    reduce_to_G,
    reduction_determinant,
    series_table,
    taylor_independence,
    verified_zeros,
)


def _rand_coeffs(rng, bound=3):
    from s4cycles.averaging import COEFF_NAMES

    return PerturbCoeffs(**{n: Fraction(rng.randint(-bound, bound), rng.randint(1, 4))
                            for n in COEFF_NAMES})


def _k_exact(*vals):
    out = []
    for i, v in enumerate(vals):
        out.append(PiPoly.pi_times(v) if i == 0 else PiPoly.rational(v))
    return KVector(*out)


# -- k map -------------------------------------------------------------------


def test_k_from_zero():
    k = k_from_perturbation(PerturbCoeffs())
    assert all(ki.is_zero() for ki in k.entries())


def test_k_single_a10():
    k = k_from_perturbation(PerturbCoeffs(a10=1))
    assert k.k1 == PiPoly.pi_times(Fraction(-1, 2))
    assert all(getattr(k, f"k{i}").is_zero() for i in range(2, 7))


def test_k_single_b10():
    k = k_from_perturbation(PerturbCoeffs(b10=1))
    assert k.k2 == PiPoly.rational(Fraction(4, 3))
    assert k.k3 == PiPoly.rational(2)
    assert k.k1.is_zero() and k.k4.is_zero() and k.k5.is_zero() and k.k6.is_zero()


def test_k_linearity():
    rng = random.Random(1)
    c1 = _rand_coeffs(rng)
    c2 = _rand_coeffs(rng)
    a, b = Fraction(3, 2), Fraction(-2, 5)
    combo = PerturbCoeffs(**{n: a * getattr(c1, n) + b * getattr(c2, n)
                             for n in c1.to_dict()})
    k1 = k_from_perturbation(c1)
    k2 = k_from_perturbation(c2)
    kc = k_from_perturbation(combo)
    for i in range(6):
        assert kc.entries()[i] == a * k1.entries()[i] + b * k2.entries()[i]


# -- jacobian ------------------------------------------------------------------


def test_jacobian_exact():
    assert jacobian_check() == PiPoly.pi_times(Fraction(-1, 8))


def test_jacobian_numeric():
    import numpy as np

    from s4cycles.averaging import _restricted_jacobian

    M = np.array([[float(x) for x in row] for row in _restricted_jacobian()])
    M[0, :] *= np.pi  # restore the pi factor carried by the first row
    det = np.linalg.det(M)
    assert abs(det + np.pi / 8) < 1e-15


def test_jacobian_column_swap_flips_sign():
    from s4cycles.averaging import _frac_det, _restricted_jacobian

    M = _restricted_jacobian()
    Mswap = [[row[1], row[0]] + row[2:] for row in M]
    assert _frac_det(Mswap) == -_frac_det(M)


# -- closed forms vs series vs quadrature ----------------------------------------


def test_f1_identity():
    val = eval_f(0.3, _k_exact(1, 0, 0, 0, 0, 0))
    # f = k1 f1 with k1 = 1 here (exact KVector carries k1 as pi multiple,
    # so use a numeric KVector instead)
    k = KVector(mpmath.mpf(1), 0, 0, 0, 0, 0)
    assert abs(eval_f(0.3, k) - mpmath.mpf("0.3")) < mpmath.mpf("1e-30")
    assert val != 0  # pi*f1 at 0.3


def test_f2_small_r_behaviour():
    k = KVector(0, mpmath.mpf(1), 0, 0, 0, 0)
    v = eval_f(1e-3, k, 160)
    assert abs(v / mpmath.mpf("1e-6") - mpmath.mpf("0.125")) < 1e-6


def test_series_matches_closed_form_at_crossover():
    # order-6 truncation at r = 1e-2 under 1e-13 per basis element
    table = series_table(6)
    with mpmath.workprec(200):
        r = mpmath.mpf("0.01")
        closed = eval_f_basis(r, 160)
        for j, row in enumerate(table.f_rows):
            acc = mpmath.mpf(0)
            for i, c in enumerate(row):
                acc += c.to_mpf() * r ** (i + 1)
            assert abs(acc - closed[j]) < mpmath.mpf("1e-13"), f"f{j+1}"


def test_series_fallback_agrees_with_closed_form_at_switch():
    # both evaluation routes at the same r, just above the series switch
    from s4cycles.averaging import _eval_series

    with mpmath.workprec(200):
        r = mpmath.mpf("2e-4")
        closed = eval_f_basis(r, 160)
        for j, row in enumerate(f_basis_series()):
            assert abs(_eval_series(row, r) - closed[j]) < mpmath.mpf("1e-30"), f"f{j+1}"


def test_f5_series_values():
    rows = f_basis_series(8)
    f5 = rows[4]
    assert f5[1] == PiPoly.pi_times(1)
    assert f5[3] == PiPoly.pi_times(Fraction(-1, 16))
    assert f5[5] == PiPoly.pi_times(Fraction(-15, 1024))
    f6 = rows[5]
    assert f6[1] == PiPoly.pi_times(Fraction(3, 4))
    assert f6[3] == PiPoly.pi_times(Fraction(9, 128))
    assert f6[5] == PiPoly.pi_times(Fraction(105, 4096))


def test_eval_f_matches_quadrature_spot():
    rng = random.Random(9)
    c = _rand_coeffs(rng)
    k = k_from_perturbation(c)
    direct = averaged_quadrature(0.5, c, 160)
    closed = eval_f(0.5, k, 160)
    assert abs(direct - closed) < mpmath.mpf("1e-12")


def test_averaged_quadrature_zero_coeffs():
    assert abs(averaged_quadrature(0.4, PerturbCoeffs(), 128)) < mpmath.mpf("1e-30")


def test_averaged_quadrature_single_a10():
    # only a10: f(r) = -pi r / 2 exactly
    c = PerturbCoeffs(a10=1)
    with mpmath.workprec(180):
        v = averaged_quadrature(Fraction(2, 5), c, 160)
        assert abs(v + mpmath.pi * Fraction(2, 5) / 2) < mpmath.mpf("1e-30")


def test_averaged_quadrature_small_r_decay():
    rng = random.Random(10)
    c = _rand_coeffs(rng)
    v1 = averaged_quadrature(1e-2, c, 128)
    v2 = averaged_quadrature(1e-3, c, 128)
    assert abs(v2) < abs(v1) + 1e-20  # O(r) decay
    assert abs(v2) < 0.1


# -- reduction to G ---------------------------------------------------------------


def test_reduce_examples():
    m = reduce_to_G(_k_exact(1, 0, 0, 0, 0, 0))
    assert m.m1 == PiPoly.pi_times(2)
    assert all(mi.is_zero() for mi in m.entries()[1:])
    m = reduce_to_G(_k_exact(0, 1, 0, 0, 0, 0))
    assert m.m2 == PiPoly.rational(3)
    assert m.m3 == PiPoly.rational(Fraction(1, 2))
    assert m.m1.is_zero() and m.m4.is_zero() and m.m5.is_zero() and m.m6.is_zero()


def test_reduction_invertible():
    assert reduction_determinant() != 0


def test_F_from_G_identity():
    assert F_from_G_identity_check(KVector.zero(), 0.5) == 0
    rng = random.Random(12)
    c = _rand_coeffs(rng)
    k = k_from_perturbation(c)
    res = F_from_G_identity_check(k, 0.5, 160)
    assert res < mpmath.mpf("1e-12")


def test_F_from_G_near_separatrix():
    rng = random.Random(13)
    c = _rand_coeffs(rng)
    k = k_from_perturbation(c)
    res = F_from_G_identity_check(k, 1 - 1e-4, 192)
    assert res < mpmath.mpf("1e-8")


# -- Taylor independence ------------------------------------------------------------


def test_taylor_independence_exact_value():
    _, det = taylor_independence()
    assert det == PiPoly([0, 0, Fraction(-685, 7516192768)])


def test_taylor_independence_numeric():
    _, det = taylor_independence()
    with mpmath.workprec(100):
        v = det.to_mpf()
        expected = -685 * mpmath.pi ** 2 / 7516192768
        assert abs(v - expected) / abs(expected) < mpmath.mpf("1e-12")


def test_g_series_match_closed_forms():
    from s4cycles.averaging import g_basis_series

    rows = g_basis_series(12)
    with mpmath.workprec(200):
        r = mpmath.mpf("0.05")
        closed = eval_g_basis(r, 160)
        for j, row in enumerate(rows):
            acc = mpmath.mpf(0)
            for i, c in enumerate(row):
                acc += c.to_mpf() * r ** i
            assert abs(acc - closed[j]) < mpmath.mpf("1e-14"), f"g{j+1}"


# -- zero design ----------------------------------------------------------------------


def test_design_single_target():
    k = design_zeros([0.5])
    f_at = eval_f(0.5, k, 160)
    assert abs(f_at) < mpmath.mpf("1e-25")


def test_design_duplicate_rejected():
    with pytest.raises(ValueError):
        design_zeros([0.5, 0.5])
    with pytest.raises(ValueError):
        design_zeros([])
    with pytest.raises(ValueError):
        design_zeros([0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    with pytest.raises(ValueError):
        design_zeros([0.0, 0.5])


def test_design_near_duplicate_conditioning():
    t0 = Fraction(1, 2)
    with pytest.raises(ConditioningError) as info:
        design_zeros([t0, t0 + Fraction(1, 10**30)], verify=False)
    assert len(info.value.singular_values) == 2


def test_design_five_targets():
    targets = [0.2, 0.35, 0.5, 0.65, 0.8]
    k = design_zeros(targets)
    zeros = verified_zeros(k)
    assert len(zeros) == 5
    for t, z in zip(targets, zeros):
        assert abs(z - mpmath.mpf(str(t))) < 1e-12


def test_design_determinism():
    k1 = design_zeros([0.3, 0.6], verify=False)
    k2 = design_zeros([0.3, 0.6], verify=False)
    assert [str(x) for x in k1.entries()] == [str(x) for x in k2.entries()]


# -- inversion ---------------------------------------------------------------------


def test_perturbation_from_k_zero():
    c = perturbation_from_k(KVector.zero())
    assert c == PerturbCoeffs()


def test_perturbation_from_k_pi_column():
    c = perturbation_from_k(_k_exact(Fraction(-1, 2), 0, 0, 0, 0, 0))
    assert c.a10 == 1
    for name in ("a01", "a20", "a11", "b10", "b01"):
        assert getattr(c, name) == 0


def test_perturbation_roundtrip_exact():
    vals = (Fraction(3, 7), Fraction(-2), Fraction(1, 3), Fraction(5, 4),
            Fraction(-1, 6), Fraction(2, 9))
    k = _k_exact(*vals)
    c = perturbation_from_k(k)
    k2 = k_from_perturbation(c)
    assert k2.k1 == k.k1
    for i in range(2, 7):
        assert getattr(k2, f"k{i}") == getattr(k, f"k{i}")


def test_perturbation_roundtrip_numeric():
    rng = random.Random(77)
    k = KVector(*[mpmath.mpf(rng.uniform(-2, 2)) for _ in range(6)])
    c = perturbation_from_k(k, prec=160)
    k2 = k_from_perturbation(c)
    with mpmath.workprec(200):
        for a, b in zip(k.entries(), k2.numeric()):
            assert abs(a - b) < mpmath.mpf("1e-14")


# -- oracle equivalence (the central correctness property) ---------------------------


@pytest.mark.slow
def test_oracle_equivalence_random_batch():
    rng = random.Random(2025)
    with mpmath.workprec(170):
        for _ in range(20):
            c = _rand_coeffs(rng)
            r = Fraction(rng.randint(5, 95), 100)
            k = k_from_perturbation(c)
            a = eval_f(r, k, 128)
            b = averaged_quadrature(r, c, 128)
            assert abs(a - b) < mpmath.mpf("1e-12")
