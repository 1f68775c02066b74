"""Field axioms and exact sign determination in Q(sqrt2)."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from s4cycles.qfield import ONE, SQRT2, ZERO, Sqrt2Rational, exact_sign

rationals = st.fractions(
    min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**4)
elements = st.builds(Sqrt2Rational, rationals, rationals)


def test_norm_identities():
    assert (ONE + SQRT2) * (ONE - SQRT2) == Sqrt2Rational(-1)
    assert (Sqrt2Rational(3, 2)) * (Sqrt2Rational(3, -2)) == ONE
    assert ONE / SQRT2 == Sqrt2Rational(0, Fraction(1, 2))


def test_exact_sign_examples():
    assert exact_sign(Sqrt2Rational(3, -2)) == 1    # 9 > 8
    assert exact_sign(Sqrt2Rational(5, -4)) == -1   # 25 < 32
    assert exact_sign(Sqrt2Rational(0, 0)) == 0
    assert exact_sign(Sqrt2Rational(-3, 2)) == -1
    assert exact_sign(Sqrt2Rational(-5, 4)) == 1


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(elements, elements, elements)
@settings(max_examples=200, deadline=None)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x


@given(elements)
@settings(max_examples=200, deadline=None)
def test_inverse_roundtrip(x):
    if not x.is_zero():
        assert x * x.inverse() == ONE
        assert (ONE / x) * x == ONE


@given(elements, elements)
@settings(max_examples=200, deadline=None)
def test_conjugation_is_ring_homomorphism_and_involution(x, y):
    assert x.conjugate().conjugate() == x
    assert (x + y).conjugate() == x.conjugate() + y.conjugate()
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert x * x.conjugate() == Sqrt2Rational(x.norm())


@given(elements)
@settings(max_examples=300, deadline=None)
def test_sign_matches_highprec_float(x):
    with mpmath.workprec(350):  # ~100 decimal digits
        val = x.to_mpf()
        float_sign = 0 if val == 0 else (1 if val > 0 else -1)
    assert exact_sign(x) == float_sign


def test_serialize_roundtrip():
    x = Sqrt2Rational(Fraction(-3, 7), Fraction(22, 5))
    assert Sqrt2Rational.parse(x.serialize()) == x
    assert x.serialize() == "-3/7 + 22/5*sqrt2"
    assert Sqrt2Rational.parse(ZERO.serialize()) == ZERO


def test_ordering():
    assert SQRT2 > ONE
    assert Sqrt2Rational(Fraction(707, 500)) < SQRT2  # 1.414 < sqrt2
    assert Sqrt2Rational(Fraction(708, 500)) > SQRT2
    assert abs(Sqrt2Rational(-1, 0)) == ONE


def test_pow():
    assert SQRT2 ** 2 == Sqrt2Rational(2)
    assert (ONE + SQRT2) ** -1 == SQRT2 - ONE
