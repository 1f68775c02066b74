"""Polynomial algebra, Sturm counting, resultants, and the r -> s substitution."""

import random
from fractions import Fraction

import mpmath
import pytest

from s4cycles.qfield import ONE, SQRT2, SQRT2_M1, Sqrt2Rational
from s4cycles.qpoly import (
    NotSquareFreeError,
    QPoly,
    QPoly2,
    certify_structural_factors,
    gcd,
    isolate_roots,
    read_poly_fixture,
    read_spot_fixture,
    remove_structural_content,
    resultant_v,
    squarefree_part,
    sturm_count,
    substitute_rs,
    sylvester_resultant_v,
    write_poly_fixture,
)

S1 = Sqrt2Rational(1)


def _rand_poly(rng, deg, bound=6):
    cs = [Sqrt2Rational(rng.randint(-bound, bound), rng.randint(-bound, bound))
          for _ in range(deg + 1)]
    return QPoly(cs)


# -- arithmetic -------------------------------------------------------------


def test_product_degree_adds():
    rng = random.Random(7)
    for _ in range(30):
        p = _rand_poly(rng, rng.randint(0, 6))
        q = _rand_poly(rng, rng.randint(0, 6))
        if p.is_zero() or q.is_zero():
            continue
        assert (p * q).degree == p.degree + q.degree


def test_divmod_roundtrip():
    rng = random.Random(11)
    for _ in range(30):
        p = _rand_poly(rng, rng.randint(0, 8))
        d = _rand_poly(rng, rng.randint(0, 4))
        if d.is_zero():
            continue
        q, r = p.divmod(d)
        assert q * d + r == p
        assert r.degree < d.degree or r.is_zero()


def test_primitive_content():
    p = QPoly([Fraction(2, 3), Fraction(4, 3), Fraction(8, 3)])
    c, prim = p.primitive()
    assert c == Fraction(2, 3)
    assert prim == QPoly([1, 2, 4])


# -- Sturm counting ---------------------------------------------------------


def test_sturm_count_examples():
    s = QPoly.x()
    p = (s * s - QPoly.constant(2)) * (s - QPoly.constant(Fraction(1, 2)))
    assert sturm_count(p, 0, 1) == 1  # only 1/2 inside
    p2 = s * s - QPoly.constant(2)
    assert sturm_count(p2, SQRT2_M1, 1) == 0  # roots +-sqrt2 outside


def test_sturm_count_endpoint_roots_divided_out():
    s = QPoly.x()
    # root exactly at the endpoint sqrt2-1 plus one interior root
    p = (s - QPoly.constant(SQRT2_M1)) ** 2 * (s - QPoly.constant(Fraction(3, 4)))
    assert sturm_count(p, SQRT2_M1, 1) == 1
    # root at the right endpoint only
    p = (s - QPoly.constant(1)) * (s + QPoly.constant(5))
    assert sturm_count(p, SQRT2_M1, 1) == 0


def test_sturm_count_zero_poly_rejected():
    with pytest.raises(ValueError):
        sturm_count(QPoly.zero(), 0, 1)
    with pytest.raises(ValueError):
        sturm_count(QPoly.one(), 1, 0)


def test_sturm_count_against_numeric_grid():
    # oracle equivalence at small scale: count sign changes of a dense numeric
    # sampling and compare to the exact certificate
    rng = random.Random(2024)
    for _ in range(40):
        deg = rng.randint(1, 12)
        p = _rand_poly(rng, deg, bound=9)
        if p.is_zero() or p.degree < 1:
            continue
        lo, hi = Fraction(-2), Fraction(2)
        plo = p(lo)
        phi = p(hi)
        if plo.is_zero() or phi.is_zero():
            continue
        exact = sturm_count(p, lo, hi)
        with mpmath.workprec(200):
            xs = [lo + (hi - lo) * Fraction(i, 4000) for i in range(4001)]
            vals = [p(x).sign() for x in xs]
        changes = 0
        prev = vals[0]
        for v in vals[1:]:
            if v != 0 and prev != 0 and v != prev:
                changes += 1
            if v != 0:
                prev = v
        # grid can only under-count (pairs of close roots), never over-count
        assert exact >= changes
        assert (exact - changes) % 2 == 0


def test_sturm_multiplicity_counts_distinct_roots():
    s = QPoly.x()
    p = (s - QPoly.constant(Fraction(1, 3))) ** 3 * (s - QPoly.constant(Fraction(2, 3)))
    assert sturm_count(p, 0, 1) == 2


# -- gcd / squarefree ---------------------------------------------------------


def test_squarefree_part_examples():
    s = QPoly.x()
    p = (s - QPoly.constant(1)) ** 2 * (s + QPoly.constant(2))
    sf = squarefree_part(p)
    expected = (s - QPoly.constant(1)) * (s + QPoly.constant(2))
    assert sf * expected.leading() == expected * sf.leading()
    assert squarefree_part(s ** 3) == s


def test_squarefree_random_products():
    rng = random.Random(5)
    for _ in range(15):
        p = _rand_poly(rng, rng.randint(1, 3))
        q = _rand_poly(rng, rng.randint(1, 3))
        if p.is_zero() or q.is_zero():
            continue
        if not gcd(p, q).degree == 0:
            continue
        sf = squarefree_part(p * q * q)
        target = (p * q)
        # equal up to a constant
        assert sf * target.leading() == target * sf.leading() or \
            sf * (-target).leading() == (-target) * sf.leading()
        assert gcd(sf, sf.derivative()).degree == 0


# -- root isolation -----------------------------------------------------------


def test_isolate_roots_two_roots():
    s = QPoly.x()
    p = (s - QPoly.constant(Fraction(1, 4))) * (s - QPoly.constant(Fraction(3, 4)))
    ivs = isolate_roots(p, 0, 1)
    assert len(ivs) == 2
    assert ivs[0].lo <= Sqrt2Rational(Fraction(1, 4)) <= ivs[0].hi
    assert ivs[1].lo <= Sqrt2Rational(Fraction(3, 4)) <= ivs[1].hi
    refined = ivs[0].refine(p, Fraction(1, 10**6))
    assert refined.width <= Sqrt2Rational(Fraction(1, 10**6))
    assert refined.lo <= Sqrt2Rational(Fraction(1, 4)) <= refined.hi


def test_isolate_roots_rejects_non_squarefree():
    s = QPoly.x()
    p = s * s - 2 * s + QPoly.constant(1)  # (s-1)^2
    with pytest.raises(NotSquareFreeError):
        isolate_roots(p, 0, 2)


def test_isolate_roots_nested_refinement():
    s = QPoly.x()
    p = s * s - QPoly.constant(2)  # root sqrt2 in (1, 2)
    ivs = isolate_roots(p, 1, 2)
    assert len(ivs) == 1
    r1 = ivs[0].refine(p, Fraction(1, 100))
    r2 = r1.refine(p, Fraction(1, 10000))
    assert r1.lo <= r2.lo and r2.hi <= r1.hi
    assert r2.lo <= SQRT2 <= r2.hi


# -- resultants ---------------------------------------------------------------


def test_resultant_linear_case():
    # res_v(v - A, v - B) = A - B under the Sylvester (P-rows-first) convention
    rng = random.Random(3)
    A = _rand_poly(rng, 2)
    B = _rand_poly(rng, 2)
    P = QPoly2([-A, QPoly.one()])
    Q = QPoly2([-B, QPoly.one()])
    assert resultant_v(P, Q) == A - B
    assert sylvester_resultant_v(P, Q) == A - B


def test_resultant_sylvester_example():
    # res(v^2 - s, v) = -s for the 3x3 Sylvester determinant
    P = QPoly2([-QPoly.x(), QPoly.zero(), QPoly.one()])
    Q = QPoly2([QPoly.zero(), QPoly.one()])
    assert sylvester_resultant_v(P, Q) == -QPoly.x()
    assert resultant_v(P, Q) == -QPoly.x()


def test_resultant_prs_matches_sylvester_random():
    rng = random.Random(17)
    for _ in range(40):
        dv1, dv2 = rng.randint(1, 3), rng.randint(1, 3)
        P = QPoly2([_rand_poly(rng, rng.randint(0, 4), 4) for _ in range(dv1 + 1)])
        Q = QPoly2([_rand_poly(rng, rng.randint(0, 4), 4) for _ in range(dv2 + 1)])
        if P.degree_v < 1 or Q.degree_v < 1:
            continue
        assert resultant_v(P, Q) == sylvester_resultant_v(P, Q)


def test_resultant_detects_common_root():
    s = QPoly.x()
    common = QPoly2([-s, QPoly.one()])          # v - s
    P = common * QPoly2([QPoly.one(), QPoly.one()])   # (v - s)(v + 1)
    Q = common * QPoly2([QPoly.constant(2), QPoly.one()])  # (v - s)(v + 2)
    assert resultant_v(P, Q).is_zero()


# -- substitution r -> s ------------------------------------------------------


def test_substitute_endpoint_images():
    r = QPoly.x()  # the identity polynomial in r
    num, k = substitute_rs(r)
    one_ps2 = QPoly([1, 0, 1])
    # at s = 1: r = 1
    assert num(S1) == (one_ps2(S1)) ** k
    # at s = sqrt2 - 1: r = 0
    assert num(SQRT2_M1).is_zero()


def test_substitute_radicals_squared():
    # image of sqrt(1+r) squares back to 1 + r(s) at s = 1/2
    num, k = substitute_rs(QPoly.one(), w_power=1)
    s_half = Sqrt2Rational(Fraction(1, 2))
    one_ps2 = QPoly([1, 0, 1])
    val = num(s_half) / (one_ps2(s_half)) ** k
    r_of_half = Sqrt2Rational(Fraction(7, 25))
    assert val * val == ONE + r_of_half
    assert val == Sqrt2Rational(0, Fraction(4, 5))  # (4/5) sqrt2


def test_substitute_matches_numeric_grid():
    rng = random.Random(23)
    p = _rand_poly(rng, 5)
    num, k = substitute_rs(p)
    with mpmath.workprec(200):
        for i in range(100):
            sv = mpmath.mpf("0.4143") + (mpmath.mpf("0.9999") - mpmath.mpf("0.4143")) * i / 99
            rv = (-1 + 6 * sv ** 2 - sv ** 4) / (1 + sv ** 2) ** 2
            lhs = num.eval_mpf(sv) / (1 + sv ** 2) ** k
            rhs = p.eval_mpf(rv)
            assert abs(lhs - rhs) <= mpmath.mpf("1e-12") * max(1, abs(rhs))


def test_substitute_u_radical_identity():
    # sqrt(1-r) image: squaring equals 1 - r(s) on a numeric grid
    num, k = substitute_rs(QPoly.one(), u_power=1)
    with mpmath.workprec(120):
        for sv in [mpmath.mpf("0.5"), mpmath.mpf("0.7"), mpmath.mpf("0.95")]:
            rv = (-1 + 6 * sv ** 2 - sv ** 4) / (1 + sv ** 2) ** 2
            val = num.eval_mpf(sv) / (1 + sv ** 2) ** k
            assert abs(val ** 2 - (1 - rv)) < mpmath.mpf("1e-25")


def test_structural_factors_certified_root_free():
    counts = certify_structural_factors()
    assert set(counts.values()) == {0}


def test_remove_structural_content():
    s = QPoly.x()
    one_ms2 = QPoly([1, 0, -1])
    core = QPoly([3, 0, 1])  # no structural factor, content 1
    p = (s ** 2) * one_ms2 * core * Fraction(6, 5)
    reduced, mult = remove_structural_content(p)
    assert mult["s"] == 2
    # 1 - s^2 may come off as (1-s)(1+s)
    total = mult.get("1-s^2", 0) + min(mult.get("1-s", 0), mult.get("1+s", 0))
    assert total == 1
    assert reduced == core


# -- fixtures -----------------------------------------------------------------


def test_fixture_roundtrip(tmp_path):
    p = QPoly([Sqrt2Rational(Fraction(1, 3), Fraction(-2, 7)), Sqrt2Rational(4, 5)])
    path = tmp_path / "poly.txt"
    write_poly_fixture(path, p)
    assert read_poly_fixture(path) == p
    spots = read_spot_fixture(path)
    assert spots[1] == Sqrt2Rational(4, 5)
