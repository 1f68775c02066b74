"""High-precision evaluation of the complete elliptic integrals and of the
closed forms

    I(r) = int_0^pi sqrt(1 - r cos t) dt   = 2 sqrt(1+r) E(m),
    J(r) = int_0^pi (1 - r cos t)^(-1/2) dt = 2 K(m) / sqrt(1+r),

with parameter m = 2r/(1+r), plus the ratio v(s) = J(r(s))/I(r(s)) under
r(s) = (-1 + 6 s^2 - s^4)/(1 + s^2)^2.

K and E use the PARAMETER convention K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt;
the identity I(r) = 2 sqrt(1+r) E(m) holds only in this convention and is pinned
against direct quadrature in the tests.

All evaluators are stateless; precision is a per-call argument in bits.
Quadrature oracles (mpmath.quad on the defining integrals) live here too but
are for tests only, never on the hot path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

import mpmath

DEFAULT_PREC = 128          # bits; verification floor
ENDPOINT_PREC = 256         # escalation near r=1 and near the s endpoints
_ENDPOINT_DISTANCE = 1e-6

_Real = Union[int, float, Fraction, mpmath.mpf]

SQRT2M1 = 0.41421356237309515  # float gate only; exact work uses qfield


def to_mpf(x: _Real) -> mpmath.mpf:
    """Exact conversion at the current working precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class EllPair:
    """I(r), J(r) at one modulus; both positive and finite for 0 <= r < 1."""

    I: mpmath.mpf
    J: mpmath.mpf
    r: mpmath.mpf


def agm_KE(m: _Real, prec: int = DEFAULT_PREC) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """K(m), E(m) by the arithmetic-geometric mean, parameter convention.

    Quadratic convergence; result carries >= prec-8 correct bits. m in [0,1).
    """
    with mpmath.workprec(prec + 16):
        mv = to_mpf(m)
        if mv < 0 or mv >= 1:
            raise ValueError(f"elliptic parameter out of range [0,1): {mv}")
        a = mpmath.mpf(1)
        b = mpmath.sqrt(1 - mv)
        c = mpmath.sqrt(mv)
        csum = c * c / 2  # 2^(n-1) c_n^2 at n=0
        pow2 = mpmath.mpf(1)
        tiny = mpmath.mpf(2) ** (-(prec + 8))
        while abs(c) > tiny * a:
            a, b, c = (a + b) / 2, mpmath.sqrt(a * b), (a - b) / 2
            csum += pow2 * c * c
            pow2 *= 2
        K = mpmath.pi / (2 * a)
        E = K * (1 - csum)
        return +K, +E


def eval_IJ(r: _Real, prec: int = DEFAULT_PREC) -> EllPair:
    """Closed-form I(r), J(r); domain error at r >= 1 where J diverges."""
    rv = to_mpf(r)
    if rv < 0 or rv >= 1:
        raise ValueError(f"modulus out of range [0,1): {rv}")
    if 1 - rv < _ENDPOINT_DISTANCE:
        prec = max(prec, ENDPOINT_PREC)
    with mpmath.workprec(prec + 16):
        rv = to_mpf(r)
        m = 2 * rv / (1 + rv)
        K, E = agm_KE(m, prec + 8)
        sq = mpmath.sqrt(1 + rv)
        I = 2 * sq * E
        J = 2 * K / sq
        # Cauchy-Schwarz on the defining integrals: I*J >= pi^2
        if not (I > 0 and J > 0 and I * J >= mpmath.pi ** 2 * (1 - mpmath.mpf(2) ** (-prec))):
            raise AssertionError("elliptic pair violates I,J > 0 or I*J >= pi^2")
        return EllPair(+I, +J, +rv)


def r_of_s(s: _Real, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """r(s) = (-1 + 6 s^2 - s^4)/(1 + s^2)^2."""
    with mpmath.workprec(prec + 16):
        sv = to_mpf(s)
        return +((-1 + 6 * sv ** 2 - sv ** 4) / (1 + sv ** 2) ** 2)


def eval_v(s: _Real, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """v(s) = J(r(s))/I(r(s)) on the open interval (sqrt2 - 1, 1)."""
    with mpmath.workprec(prec + 16):
        sv = to_mpf(s)
        left = mpmath.sqrt(2) - 1
        if not (left < sv < 1):
            raise ValueError(f"s out of range (sqrt2-1, 1): {sv}")
        if sv - left < _ENDPOINT_DISTANCE or 1 - sv < _ENDPOINT_DISTANCE:
            prec = max(prec, ENDPOINT_PREC)
    with mpmath.workprec(prec + 16):
        sv = to_mpf(s)
        rv = (-1 + 6 * sv ** 2 - sv ** 4) / (1 + sv ** 2) ** 2
        pair = eval_IJ(rv, prec)
        return +(pair.J / pair.I)


# ---------------------------------------------------------------------------
# quadrature oracles (tests only)
# ---------------------------------------------------------------------------


def quad_KE(m: _Real, prec: int = DEFAULT_PREC) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """K, E from their defining integrals by adaptive quadrature."""
    with mpmath.workprec(prec + 24):
        mv = to_mpf(m)
        K = mpmath.quad(lambda t: 1 / mpmath.sqrt(1 - mv * mpmath.sin(t) ** 2),
                        [0, mpmath.pi / 2])
        E = mpmath.quad(lambda t: mpmath.sqrt(1 - mv * mpmath.sin(t) ** 2),
                        [0, mpmath.pi / 2])
        return +K, +E


def quad_IJ(r: _Real, prec: int = DEFAULT_PREC) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """I, J from the theta-integrals by adaptive quadrature."""
    with mpmath.workprec(prec + 24):
        rv = to_mpf(r)
        I = mpmath.quad(lambda t: mpmath.sqrt(1 - rv * mpmath.cos(t)), [0, mpmath.pi])
        J = mpmath.quad(lambda t: 1 / mpmath.sqrt(1 - rv * mpmath.cos(t)),
                        [0, mpmath.pi, ])
        return +I, +J
