"""Exact arithmetic in the real quadratic field Q(sqrt(2)).

Every certificate in this package (Sturm counts, resultants, polynomial
identities) is carried out over numbers a + b*sqrt(2) with arbitrary-precision
rational a, b.  Sign determination is exact: comparing a + b*sqrt(2) against 0
never touches floating point, it reduces to integer comparisons of a^2 vs
2*b^2.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

_Scalar = Union[int, Fraction, "Sqrt2Rational"]


class Sqrt2Rational:
    """a + b*sqrt(2) with exact rational parts, normalized eagerly.

    Instances are immutable value objects: safe to share, hash and compare.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Union[int, str, Fraction] = 0, b: Union[int, str, Fraction] = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("Sqrt2Rational is immutable")

    def __reduce__(self):
        return (Sqrt2Rational, (self.a, self.b))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def coerce(x: _Scalar) -> "Sqrt2Rational":
        if isinstance(x, Sqrt2Rational):
            return x
        return Sqrt2Rational(x)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: _Scalar) -> "Sqrt2Rational":
        o = Sqrt2Rational.coerce(other)
        return Sqrt2Rational(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: _Scalar) -> "Sqrt2Rational":
        o = Sqrt2Rational.coerce(other)
        return Sqrt2Rational(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: _Scalar) -> "Sqrt2Rational":
        return Sqrt2Rational.coerce(other) - self

    def __mul__(self, other: _Scalar) -> "Sqrt2Rational":
        o = Sqrt2Rational.coerce(other)
        return Sqrt2Rational(self.a * o.a + 2 * self.b * o.b,
                             self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self) -> "Sqrt2Rational":
        return Sqrt2Rational(-self.a, -self.b)

    def __pow__(self, n: int) -> "Sqrt2Rational":
        if n < 0:
            return (self ** (-n)).inverse()
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Sqrt2Rational":
        """Galois conjugate a + b*sqrt(2) -> a - b*sqrt(2)."""
        return Sqrt2Rational(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm a^2 - 2 b^2 (= self * conjugate, a pure rational)."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "Sqrt2Rational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(sqrt2)")
        return Sqrt2Rational(self.a / n, -self.b / n)

    def __truediv__(self, other: _Scalar) -> "Sqrt2Rational":
        return self * Sqrt2Rational.coerce(other).inverse()

    def __rtruediv__(self, other: _Scalar) -> "Sqrt2Rational":
        return Sqrt2Rational.coerce(other) * self.inverse()

    # -- exact order -------------------------------------------------------

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}, decided by integer comparisons only."""
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # opposite strict signs: compare a^2 against 2 b^2
        d = a * a - 2 * b * b
        if a > 0:  # b < 0
            return 1 if d > 0 else (-1 if d < 0 else 0)
        return -1 if d > 0 else (1 if d < 0 else 0)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Sqrt2Rational(other)
        if not isinstance(other, Sqrt2Rational):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other: _Scalar) -> bool:
        return (self - Sqrt2Rational.coerce(other)).sign() < 0

    def __le__(self, other: _Scalar) -> bool:
        return (self - Sqrt2Rational.coerce(other)).sign() <= 0

    def __gt__(self, other: _Scalar) -> bool:
        return (self - Sqrt2Rational.coerce(other)).sign() > 0

    def __ge__(self, other: _Scalar) -> bool:
        return (self - Sqrt2Rational.coerce(other)).sign() >= 0

    def __abs__(self) -> "Sqrt2Rational":
        return -self if self.sign() < 0 else self

    # -- conversions -------------------------------------------------------

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 1.4142135623730951

    def to_mpf(self):
        """Value as an mpmath float at the caller's working precision."""
        import mpmath

        return mpmath.mpf(self.a.numerator) / self.a.denominator + \
            (mpmath.mpf(self.b.numerator) / self.b.denominator) * mpmath.sqrt(2)

    # -- text serialization (fixture format) -------------------------------

    def serialize(self) -> str:
        """Canonical text form "a_num/a_den + b_num/b_den*sqrt2"."""
        return (f"{self.a.numerator}/{self.a.denominator}"
                f" + {self.b.numerator}/{self.b.denominator}*sqrt2")

    @staticmethod
    def parse(text: str) -> "Sqrt2Rational":
        """Inverse of serialize(); exact round-trip."""
        left, _, right = text.partition("+")
        right = right.strip()
        if not right.endswith("*sqrt2"):
            raise ValueError(f"not a Sqrt2Rational literal: {text!r}")
        return Sqrt2Rational(Fraction(left.strip()),
                             Fraction(right[: -len("*sqrt2")].strip()))

    def __repr__(self):
        if self.b == 0:
            return f"Sqrt2Rational({self.a})"
        return f"Sqrt2Rational({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        return f"{self.a} + {self.b}*sqrt2"


ZERO = Sqrt2Rational(0)
ONE = Sqrt2Rational(1)
SQRT2 = Sqrt2Rational(0, 1)
SQRT2_M1 = Sqrt2Rational(-1, 1)  # sqrt(2) - 1, the left endpoint of the s-interval


def exact_sign(x: Sqrt2Rational) -> int:
    """Sign of a + b*sqrt(2) in {-1, 0, +1}, exact."""
    return Sqrt2Rational.coerce(x).sign()
