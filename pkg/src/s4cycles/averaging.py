"""The averaged-function pipeline.

Perturbation coefficients (20 rationals) -> the six averaged-function
coefficients k1..k6 -> the averaged function

    f(r) = k1 f1 + ... + k6 f6,   r in (0,1),

with the basis

    f1 = r,
    f2 = (3 r + (1-r)^{3/2} - (1+r)^{3/2}) / r,
    f3 = -2 + (1-r)^{3/2} + (1+r)^{3/2},
    f4 = (2 r - (1-r^2) log((1+r)/(1-r))) / r,
    f5 = r I(r),
    f6 = (I(r) - (1-r^2) J(r)) / r,

plus the reduction to G(r) = sum m_i g_i obtained by differentiating
F(r)/(1-r^2) with F = r f, the exact Taylor/independence bookkeeping, zero
design by collocation, and inversion back to perturbation coefficients.

Exact scalars that mix rationals with pi are carried as PiPoly (polynomials
in pi over Fraction); everything numeric runs on mpmath at a caller-chosen
precision in bits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath

from .ellfun import DEFAULT_PREC, eval_IJ, to_mpf

_Rat = Union[int, Fraction]


class ConditioningError(RuntimeError):
    """Collocation matrix is numerically rank-deficient; carries the singular
    values for diagnosis."""

    def __init__(self, message: str, singular_values: Sequence[float]):
        super().__init__(message)
        self.singular_values = list(singular_values)


# ---------------------------------------------------------------------------
# exact scalars: polynomials in pi over Q
# ---------------------------------------------------------------------------


class PiPoly:
    """Sum c_i * pi^i with exact rational c_i; closed under + and *."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[_Rat] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("PiPoly is immutable")

    @staticmethod
    def rational(c: _Rat) -> "PiPoly":
        return PiPoly([c])

    @staticmethod
    def pi_times(c: _Rat) -> "PiPoly":
        return PiPoly([0, c])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def rational_part(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    @property
    def pi_part(self) -> Fraction:
        return self.coeffs[1] if len(self.coeffs) > 1 else Fraction(0)

    def __add__(self, other):
        other = _as_pipoly(other)
        a, b = list(self.coeffs), list(other.coeffs)
        if len(a) < len(b):
            a, b = b, a
        for i, c in enumerate(b):
            a[i] += c
        return PiPoly(a)

    __radd__ = __add__

    def __neg__(self):
        return PiPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_pipoly(other))

    def __rsub__(self, other):
        return _as_pipoly(other) + (-self)

    def __mul__(self, other):
        other = _as_pipoly(other)
        if self.is_zero() or other.is_zero():
            return PiPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PiPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PiPoly.rational(other)
        if not isinstance(other, PiPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_mpf(self) -> mpmath.mpf:
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * mpmath.pi + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"({c})*pi")
            else:
                parts.append(f"({c})*pi^{i}")
        return " + ".join(parts)


def _as_pipoly(x) -> PiPoly:
    if isinstance(x, PiPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return PiPoly.rational(x)
    raise TypeError(f"cannot mix PiPoly with {type(x)!r}")


Scalar = Union[PiPoly, mpmath.mpf, float]


def scalar_to_mpf(x: Scalar) -> mpmath.mpf:
    if isinstance(x, PiPoly):
        return x.to_mpf()
    return to_mpf(x)


# ---------------------------------------------------------------------------
# coefficient containers
# ---------------------------------------------------------------------------

COEFF_NAMES = (
    "a10", "a01", "a20", "a11", "a02",
    "b10", "b01", "b20", "b11", "b02",
    "c10", "c01", "c20", "c11", "c02",
    "d10", "d01", "d20", "d11", "d02",
)


@dataclass(frozen=True)
class PerturbCoeffs:
    """The 20 quadratic perturbation amplitudes, exact rationals.

    xy-exponents from the name: a10 multiplies x, a02 multiplies y^2, etc.
    a/b feed the zone x>0 (dx/dt resp. dy/dt), c/d the zone x<0.
    """

    a10: Fraction = Fraction(0)
    a01: Fraction = Fraction(0)
    a20: Fraction = Fraction(0)
    a11: Fraction = Fraction(0)
    a02: Fraction = Fraction(0)
    b10: Fraction = Fraction(0)
    b01: Fraction = Fraction(0)
    b20: Fraction = Fraction(0)
    b11: Fraction = Fraction(0)
    b02: Fraction = Fraction(0)
    c10: Fraction = Fraction(0)
    c01: Fraction = Fraction(0)
    c20: Fraction = Fraction(0)
    c11: Fraction = Fraction(0)
    c02: Fraction = Fraction(0)
    d10: Fraction = Fraction(0)
    d01: Fraction = Fraction(0)
    d20: Fraction = Fraction(0)
    d11: Fraction = Fraction(0)
    d02: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, f.name, Fraction(v))

    @staticmethod
    def from_dict(d: Dict[str, Union[str, int, float, Fraction]]) -> "PerturbCoeffs":
        vals = {}
        for name, v in d.items():
            if name not in COEFF_NAMES:
                raise KeyError(f"unknown coefficient {name!r}")
            vals[name] = Fraction(v)  # floats convert exactly (dyadic)
        return PerturbCoeffs(**vals)

    def to_dict(self) -> Dict[str, str]:
        return {name: str(getattr(self, name)) for name in COEFF_NAMES}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "PerturbCoeffs":
        return PerturbCoeffs.from_dict(json.loads(text))


@dataclass(frozen=True)
class KVector:
    """Averaged-function coefficients; k1 is a pure pi multiple in exact mode,
    k2..k6 pure rationals. Numeric entries (mpf/float) appear on the design
    path."""

    k1: Scalar
    k2: Scalar
    k3: Scalar
    k4: Scalar
    k5: Scalar
    k6: Scalar

    def entries(self) -> Tuple[Scalar, ...]:
        return (self.k1, self.k2, self.k3, self.k4, self.k5, self.k6)

    def numeric(self) -> List[mpmath.mpf]:
        return [scalar_to_mpf(k) for k in self.entries()]

    def to_dict(self) -> Dict[str, float]:
        return {f"k{i+1}": float(scalar_to_mpf(k)) for i, k in enumerate(self.entries())}

    @staticmethod
    def zero() -> "KVector":
        return KVector(*(PiPoly() for _ in range(6)))


@dataclass(frozen=True)
class MVector:
    """Coefficients of the log-free reduction G = sum m_i g_i."""

    m1: Scalar
    m2: Scalar
    m3: Scalar
    m4: Scalar
    m5: Scalar
    m6: Scalar

    def entries(self) -> Tuple[Scalar, ...]:
        return (self.m1, self.m2, self.m3, self.m4, self.m5, self.m6)

    def numeric(self) -> List[mpmath.mpf]:
        return [scalar_to_mpf(m) for m in self.entries()]

    def to_dict(self) -> Dict[str, float]:
        return {f"m{i+1}": float(scalar_to_mpf(m)) for i, m in enumerate(self.entries())}


# ---------------------------------------------------------------------------
# k from the perturbation, and back
# ---------------------------------------------------------------------------


def k_from_perturbation(c: PerturbCoeffs) -> KVector:
    """Exact linear map from the 20 amplitudes to k1..k6."""
    F = Fraction
    k1 = PiPoly.pi_times(F(1, 16) * (-8 * (c.a10 + c.c10) + 3 * (c.a11 + c.c11)
                                     + 32 * (c.b01 + c.d01) - 24 * (c.b02 + c.d02)))
    k2 = PiPoly.rational(F(1, 6) * (8 * (c.a01 - c.c01) - 6 * (c.a02 - c.c02)
                                    + 8 * (c.b10 - c.d10) - 3 * (c.b11 - c.d11)))
    k3 = PiPoly.rational(F(1, 4) * (8 * (c.b10 - c.d10) - 3 * (c.b11 - c.d11)))
    k4 = PiPoly.rational(F(-3, 16) * (c.a20 - c.c20 - 2 * (c.b11 - c.d11)))
    k5 = PiPoly.rational(F(-1, 8) * (16 * (c.b01 + c.d01) + 3 * (c.b20 + c.d20)
                                     - 6 * (c.b02 + c.d02)))
    k6 = PiPoly.rational(F(-1, 12) * (3 * (c.a11 + c.c11) + 8 * (c.b01 + c.d01)
                                      - 6 * (c.b20 + c.d20) - 12 * (c.b02 + c.d02)))
    return KVector(k1, k2, k3, k4, k5, k6)


# the six amplitudes the inversion solves for; all others pinned to zero
INVERSION_COLUMNS = ("a10", "a01", "a20", "a11", "b10", "b01")


def _restricted_jacobian() -> List[List[Fraction]]:
    """Rows k1..k6 (k1 divided by pi), columns INVERSION_COLUMNS; exact."""
    M: List[List[Fraction]] = []
    cols = []
    for name in INVERSION_COLUMNS:
        c = PerturbCoeffs(**{name: Fraction(1)})
        k = k_from_perturbation(c)
        cols.append([k.k1.pi_part, k.k2.rational_part, k.k3.rational_part,
                     k.k4.rational_part, k.k5.rational_part, k.k6.rational_part])
    for i in range(6):
        M.append([cols[j][i] for j in range(6)])
    return M


def _frac_det(M: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(M)
    A = [list(map(Fraction, row)) for row in M]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if A[i][k] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        inv = 1 / A[k][k]
        for i in range(k + 1, n):
            factor = A[i][k] * inv
            if factor:
                for j in range(k, n):
                    A[i][j] -= factor * A[k][j]
    return det


def jacobian_check() -> PiPoly:
    """The exact 6x6 Jacobian determinant of (k1..k6) with respect to the six
    amplitudes (a10, a01, a20, a11, b10, b01): equals -pi/8."""
    det_rat = _frac_det(_restricted_jacobian())
    return PiPoly.pi_times(det_rat)  # one factor of pi from the k1 row


def perturbation_from_k(k: KVector, prec: int = DEFAULT_PREC) -> PerturbCoeffs:
    """Invert k -> amplitudes on the six selected columns (rest zero).

    Exact for PiPoly input; numeric input is solved at `prec` bits and the
    dyadic results are stored as exact Fractions.
    """
    M = _restricted_jacobian()
    exact = all(isinstance(x, PiPoly) for x in k.entries())
    if exact:
        if k.k1.rational_part != 0 or any(
                getattr(k, f"k{i}").pi_part != 0 for i in range(2, 7)):
            raise ValueError("exact KVector must have k1 pure pi, k2..k6 rational")
        rhs = [k.k1.pi_part, k.k2.rational_part, k.k3.rational_part,
               k.k4.rational_part, k.k5.rational_part, k.k6.rational_part]
        sol = _frac_solve(M, rhs)
        return PerturbCoeffs(**dict(zip(INVERSION_COLUMNS, sol)))
    with mpmath.workprec(prec + 16):
        A = mpmath.matrix(6, 6)
        for i in range(6):
            for j in range(6):
                A[i, j] = mpmath.mpf(M[i][j].numerator) / M[i][j].denominator
        kn = k.numeric()
        b = mpmath.matrix([kn[0] / mpmath.pi] + list(kn[1:]))
        x = mpmath.lu_solve(A, b)
        sol = [_mpf_to_fraction(x[i]) for i in range(6)]
        return PerturbCoeffs(**dict(zip(INVERSION_COLUMNS, sol)))


def _mpf_to_fraction(x) -> Fraction:
    # mpf is a dyadic rational; this conversion is exact
    p, q = mpmath.libmp.to_rational(mpmath.mpf(x)._mpf_)
    return Fraction(int(p), int(q))


def _frac_solve(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> List[Fraction]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(M)]
    for k in range(n):
        piv = next(i for i in range(k, n) if A[i][k] != 0)
        A[k], A[piv] = A[piv], A[k]
        inv = 1 / A[k][k]
        for i in range(n):
            if i != k and A[i][k] != 0:
                f = A[i][k] * inv
                for j in range(k, n + 1):
                    A[i][j] -= f * A[k][j]
    return [A[i][n] / A[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# the f and g bases: closed forms and exact series
# ---------------------------------------------------------------------------

SERIES_SWITCH_R = 1e-4   # below this the closed forms are 0/0-prone; use series
_SERIES_ORDER = 26


def _binom_frac(alpha: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (alpha - i)
        out /= (i + 1)
    return out


@lru_cache(maxsize=None)
def _sqrt_series(sign: int, order: int) -> Tuple[Fraction, ...]:
    """(1 + sign*r)^(1/2) Taylor coefficients."""
    return tuple(_binom_frac(Fraction(1, 2), k) * sign ** k for k in range(order + 1))


@lru_cache(maxsize=None)
def _pow32_series(sign: int, order: int) -> Tuple[Fraction, ...]:
    """(1 + sign*r)^(3/2) Taylor coefficients."""
    return tuple(_binom_frac(Fraction(3, 2), k) * sign ** k for k in range(order + 1))


@lru_cache(maxsize=None)
def _IJ_series(order: int) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """I/pi and J/pi as series in r (even powers only, stored densely)."""
    I = [Fraction(0)] * (order + 1)
    J = [Fraction(0)] * (order + 1)
    for k in range(0, order // 2 + 1):
        wallis = Fraction(_central_binom(k), 4 ** k)
        if 2 * k <= order:
            I[2 * k] = _binom_frac(Fraction(1, 2), 2 * k) * wallis
            J[2 * k] = _binom_frac(Fraction(-1, 2), 2 * k) * wallis
    return tuple(I), tuple(J)


def _central_binom(k: int) -> int:
    from math import comb

    return comb(2 * k, k)


@lru_cache(maxsize=None)
def f_basis_series(order: int = _SERIES_ORDER) -> Tuple[Tuple[PiPoly, ...], ...]:
    """Exact Taylor coefficients (index = power of r) of f1..f6 at r = 0."""
    n = order
    z = [Fraction(0)] * (n + 2)
    p32m = _pow32_series(-1, n + 2)  # (1-r)^{3/2}
    p32p = _pow32_series(+1, n + 2)
    Iser, Jser = _IJ_series(n + 2)

    f1 = list(z)
    if n >= 1:
        f1[1] = Fraction(1)
    # f2 = (3r + (1-r)^{3/2} - (1+r)^{3/2})/r
    num = list(z)
    for k in range(n + 2):
        num[k] = p32m[k] - p32p[k]
    num[1] += 3
    assert num[0] == 0
    f2 = list(num[1: n + 2])  # shift down one power of r
    # f3 = -2 + (1-r)^{3/2} + (1+r)^{3/2}
    f3 = [p32m[k] + p32p[k] for k in range(n + 1)]
    f3[0] -= 2
    # f4 = (2r - (1-r^2) log((1+r)/(1-r)))/r = sum_{k>=1} 4/(4k^2-1) r^{2k}
    f4 = list(z[: n + 1])
    for k in range(1, n // 2 + 1):
        f4[2 * k] = Fraction(4, 4 * k * k - 1)
    # f5 = r I(r) (pi multiple)
    f5 = [Fraction(0)] + list(Iser[:n])
    # f6 = (I - (1-r^2) J)/r (pi multiple)
    num6 = [Iser[k] - Jser[k] + (Jser[k - 2] if k >= 2 else 0) for k in range(n + 2)]
    assert num6[0] == 0
    f6 = num6[1: n + 2][:n + 1]
    rat = lambda seq: tuple(PiPoly.rational(c) for c in seq)
    pi_ = lambda seq: tuple(PiPoly.pi_times(c) for c in seq)
    return (rat(f1[: n + 1]), rat(f2[: n + 1]), rat(f3[: n + 1]),
            rat(f4[: n + 1]), pi_(f5[: n + 1]), pi_(f6[: n + 1]))


@lru_cache(maxsize=None)
def g_basis_series(order: int = _SERIES_ORDER) -> Tuple[Tuple[PiPoly, ...], ...]:
    """Exact Taylor coefficients of g1..g6 at r = 0."""
    n = order
    um = _sqrt_series(-1, n + 1)  # (1-r)^{1/2}
    wp = _sqrt_series(+1, n + 1)
    Iser, Jser = _IJ_series(n + 1)
    g1 = [Fraction(0)] * (n + 1)
    if n >= 1:
        g1[1] = Fraction(1)
    g2 = [Fraction(0)] * (n + 1)
    if n >= 2:
        g2[2] = Fraction(1)
    # g3 = 6 + 4r(u - w) - (3 + r^2)(u + w)
    g3 = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        g3[k] -= 3 * (um[k] + wp[k])
        if k >= 1:
            g3[k] += 4 * (um[k - 1] - wp[k - 1])
        if k >= 2:
            g3[k] -= (um[k - 2] + wp[k - 2])
    g3[0] += 6
    # g4 = -4 + 2(1 + r^2)(u + w) + r(-5 + r^2)(u - w)
    g4 = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        g4[k] += 2 * (um[k] + wp[k])
        if k >= 1:
            g4[k] -= 5 * (um[k - 1] - wp[k - 1])
        if k >= 2:
            g4[k] += 2 * (um[k - 2] + wp[k - 2])
        if k >= 3:
            g4[k] += (um[k - 3] - wp[k - 3])
    g4[0] -= 4
    # g5 = r((-5 + r^2) I + (1 - r^2) J)
    g5 = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        if k >= 1:
            g5[k] += -5 * Iser[k - 1] + Jser[k - 1]
        if k >= 3:
            g5[k] += Iser[k - 3] - Jser[k - 3]
    # g6 = r(4 I - (1 - r^2) J)
    g6 = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        if k >= 1:
            g6[k] += 4 * Iser[k - 1] - Jser[k - 1]
        if k >= 3:
            g6[k] += Jser[k - 3]
    rat = lambda seq: tuple(PiPoly.rational(c) for c in seq)
    pi_ = lambda seq: tuple(PiPoly.pi_times(c) for c in seq)
    return rat(g1), rat(g2), rat(g3), rat(g4), pi_(g5), pi_(g6)


def _eval_series(coeffs: Sequence[PiPoly], r: mpmath.mpf) -> mpmath.mpf:
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * r + c.to_mpf()
    return acc


def eval_f_basis(r, prec: int = DEFAULT_PREC) -> List[mpmath.mpf]:
    """f1(r)..f6(r) at `prec` bits; series fallback below SERIES_SWITCH_R."""
    with mpmath.workprec(prec + 16):
        rv = to_mpf(r)
        if not (0 < rv < 1):
            raise ValueError(f"r out of range (0,1): {rv}")
        if rv < SERIES_SWITCH_R:
            return [+_eval_series(c, rv) for c in f_basis_series()]
        pair = eval_IJ(rv, prec)
        I, J = pair.I, pair.J
        sm = mpmath.sqrt(1 - rv)
        sp = mpmath.sqrt(1 + rv)
        f1 = rv
        f2 = (3 * rv + sm ** 3 - sp ** 3) / rv
        f3 = -2 + sm ** 3 + sp ** 3
        f4 = (2 * rv - (1 - rv ** 2) * mpmath.log((1 + rv) / (1 - rv))) / rv
        f5 = rv * I
        f6 = (I - (1 - rv ** 2) * J) / rv
        return [+f1, +f2, +f3, +f4, +f5, +f6]


def eval_g_basis(r, prec: int = DEFAULT_PREC) -> List[mpmath.mpf]:
    """g1(r)..g6(r) at `prec` bits; series fallback below SERIES_SWITCH_R."""
    with mpmath.workprec(prec + 16):
        rv = to_mpf(r)
        if not (0 < rv < 1):
            raise ValueError(f"r out of range (0,1): {rv}")
        if rv < SERIES_SWITCH_R:
            return [+_eval_series(c, rv) for c in g_basis_series()]
        pair = eval_IJ(rv, prec)
        I, J = pair.I, pair.J
        u = mpmath.sqrt(1 - rv)
        w = mpmath.sqrt(1 + rv)
        g1 = rv
        g2 = rv * rv
        g3 = 6 + 4 * rv * (u - w) - (3 + rv ** 2) * (u + w)
        g4 = -4 + 2 * (1 + rv ** 2) * (u + w) + rv * (-5 + rv ** 2) * (u - w)
        g5 = rv * ((-5 + rv ** 2) * I + (1 - rv ** 2) * J)
        g6 = rv * (4 * I - (1 - rv ** 2) * J)
        return [+g1, +g2, +g3, +g4, +g5, +g6]


def eval_f(r, k: KVector, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """The averaged function f(r) = sum k_i f_i(r)."""
    with mpmath.workprec(prec + 16):
        basis = eval_f_basis(r, prec)
        kn = k.numeric()
        return +mpmath.fsum(ki * fi for ki, fi in zip(kn, basis))


def eval_G(r, m: MVector, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """G(r) = sum m_i g_i(r)."""
    with mpmath.workprec(prec + 16):
        basis = eval_g_basis(r, prec)
        mn = m.numeric()
        return +mpmath.fsum(mi * gi for mi, gi in zip(mn, basis))


# ---------------------------------------------------------------------------
# independent oracle: the averaged integral computed directly
# ---------------------------------------------------------------------------


def averaged_quadrature(r, c: PerturbCoeffs, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """f(r) by direct quadrature of the averaged integrand, built from the
    polar parametrization x = 3 r sin(t)/(16(1 - r cos t)),
    y = (3/8)(-1 + (1 - r cos t)^(-1/2)) without using the closed forms."""
    with mpmath.workprec(prec + 24):
        rv = to_mpf(r)
        if not (0 < rv < 1):
            raise ValueError(f"r out of range (0,1): {rv}")
        P_coef = {(1, 0): c.a10 + c.c10, (0, 1): c.a01 - c.c01,
                  (2, 0): c.a20 - c.c20, (1, 1): c.a11 + c.c11,
                  (0, 2): c.a02 - c.c02}
        Q_coef = {(1, 0): c.b10 - c.d10, (0, 1): c.b01 + c.d01,
                  (2, 0): c.b20 + c.d20, (1, 1): c.b11 - c.d11,
                  (0, 2): c.b02 + c.d02}
        # (i,j) entries carry (-1)^i: a_ij - (-1)^i c_ij and b_ij + (-1)^i d_ij

        def integrand(t):
            ct = mpmath.cos(t)
            st = mpmath.sin(t)
            root = mpmath.sqrt(1 - rv * ct)
            x = 3 * rv * st / (16 * (1 - rv * ct))
            y = (mpmath.mpf(3) / 8) * (-1 + 1 / root)
            mono = {(1, 0): x, (0, 1): y, (2, 0): x * x, (1, 1): x * y, (0, 2): y * y}
            P = mpmath.fsum(mpmath.mpf(v.numerator) / v.denominator * mono[ij]
                            for ij, v in P_coef.items() if v)
            Q = mpmath.fsum(mpmath.mpf(v.numerator) / v.denominator * mono[ij]
                            for ij, v in Q_coef.items() if v)
            return -(1 - rv * ct) * st * P + root * (rv - ct) * Q

        val = mpmath.quad(integrand, [0, mpmath.pi])
        return +(mpmath.mpf(16) / 3 * val)


# ---------------------------------------------------------------------------
# reduction to G and the integral identity
# ---------------------------------------------------------------------------


def reduce_to_G(k: KVector) -> MVector:
    """m1 = 2 k1, m2 = 3 k2 - 2 k3 + 4 k4, m3 = k2/2, m4 = k3/2,
    m5 = -k5/2, m6 = k6/2 (exact on PiPoly, numeric otherwise)."""
    half = Fraction(1, 2)
    k1, k2, k3, k4, k5, k6 = k.entries()
    if isinstance(k1, PiPoly):
        return MVector(2 * k1, 3 * k2 - 2 * k3 + 4 * k4, half * k2, half * k3,
                       -half * k5, half * k6)
    return MVector(2 * k1, 3 * k2 - 2 * k3 + 4 * k4, k2 / 2, k3 / 2,
                   -k5 / 2, k6 / 2)


def reduction_matrix() -> List[List[Fraction]]:
    """The 6x6 matrix of the k -> m map (exact)."""
    F = Fraction
    return [
        [F(2), 0, 0, 0, 0, 0],
        [0, F(3), F(-2), F(4), 0, 0],
        [0, F(1, 2), 0, 0, 0, 0],
        [0, 0, F(1, 2), 0, 0, 0],
        [0, 0, 0, 0, F(-1, 2), 0],
        [0, 0, 0, 0, 0, F(1, 2)],
    ]


def reduction_determinant() -> Fraction:
    return _frac_det(reduction_matrix())


def F_from_G_identity_check(k: KVector, r, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """Residual |F(r) - (1-r^2) int_0^r G(xi)/(1-xi^2)^2 dxi| with F = r f."""
    with mpmath.workprec(prec + 24):
        rv = to_mpf(r)
        m = reduce_to_G(k)
        F_val = rv * eval_f(rv, k, prec)
        integral = mpmath.quad(
            lambda xi: eval_G(xi, m, prec) / (1 - xi ** 2) ** 2 if xi > 0 else mpmath.mpf(0),
            [0, rv])
        return +abs(F_val - (1 - rv ** 2) * integral)


# ---------------------------------------------------------------------------
# Taylor independence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTable:
    """Exact Taylor coefficients (powers r^1..r^order) of the f and g bases."""

    order: int
    f_rows: Tuple[Tuple[PiPoly, ...], ...]
    g_rows: Tuple[Tuple[PiPoly, ...], ...]


def series_table(order: int = 6) -> SeriesTable:
    f = f_basis_series(max(order, 8))
    g = g_basis_series(max(order, 8))
    return SeriesTable(order,
                       tuple(tuple(row[1: order + 1]) for row in f),
                       tuple(tuple(row[1: order + 1]) for row in g))


def taylor_independence(order: int = 6) -> Tuple[SeriesTable, PiPoly]:
    """The coefficient matrix of (r, r^2, ..., r^6) for f1..f6 and its exact
    determinant -685 pi^2 / 7516192768 (pi symbolic)."""
    table = series_table(order)
    pi_powers = []
    M: List[List[Fraction]] = [[Fraction(0)] * 6 for _ in range(order)]
    for j, row in enumerate(table.f_rows):
        has_pi = any(c.pi_part != 0 for c in row)
        has_rat = any(c.rational_part != 0 for c in row)
        if has_pi and has_rat:
            raise AssertionError("basis column mixes pi and rational parts")
        pi_powers.append(1 if has_pi else 0)
        for i, cell in enumerate(row):
            M[i][j] = cell.pi_part if has_pi else cell.rational_part
    det_rat = _frac_det(M)
    total_pi = sum(pi_powers)
    coeffs = [Fraction(0)] * (total_pi + 1)
    coeffs[total_pi] = det_rat
    return table, PiPoly(coeffs)


# ---------------------------------------------------------------------------
# zero design
# ---------------------------------------------------------------------------


def design_zeros(targets: Sequence[Union[float, Fraction]],
                 prec: int = 128,
                 verify: bool = True) -> KVector:
    """Coefficients k (numeric, ||k||_inf = 1) whose averaged function has a
    simple zero at every target; at most 5 targets, distinct, inside (0,1).

    k spans the null space of the collocation matrix [f_j(r_i)], computed by
    SVD at `prec` bits; the sign of the first nonzero entry is fixed positive
    so repeated runs are bit-identical.
    """
    targets = sorted(Fraction(t) if isinstance(t, Fraction) else Fraction(str(t))
                     for t in targets)
    if not 1 <= len(targets) <= 5:
        raise ValueError("need between 1 and 5 targets")
    if len(set(targets)) != len(targets):
        raise ValueError("duplicate targets")
    if targets[0] <= 0 or targets[-1] >= 1:
        raise ValueError("targets must lie strictly inside (0,1)")
    n = len(targets)
    with mpmath.workprec(prec + 32):
        A = mpmath.matrix(n, 6)
        for i, t in enumerate(targets):
            row = eval_f_basis(t, prec + 16)
            for j in range(6):
                A[i, j] = row[j]
        U, S, V = mpmath.svd_r(A, full_matrices=True)
        svals = [S[i] for i in range(n)]
        if svals[0] == 0 or svals[-1] / svals[0] < mpmath.mpf(2) ** (-(prec // 2)):
            raise ConditioningError(
                "collocation matrix is numerically rank-deficient "
                f"(singular values {[float(s) for s in svals]})",
                [float(s) for s in svals])
        null = [V[5, j] for j in range(6)]  # last right singular vector
        norm = max(abs(x) for x in null)
        null = [x / norm for x in null]
        first = next(x for x in null if abs(x) > mpmath.mpf(2) ** (-prec // 2))
        if first < 0:
            null = [-x for x in null]
        k = KVector(*[+x for x in null])
    if verify:
        zeros = verified_zeros(k, prec=prec)
        if len(zeros) > 5:
            raise RuntimeError(
                f"designed combination shows {len(zeros)} zeros; at most 5 possible")
        for t in targets:
            if not any(abs(z - to_mpf(t)) < 1e-10 for z in zeros):
                raise RuntimeError(f"no verified simple zero at target {t}")
    return k


def verified_zeros(k: KVector, window: Tuple[float, float] = (1e-3, 1 - 1e-3),
                   grid: int = 10_000, prec: int = 128) -> List[mpmath.mpf]:
    """Zeros of f in the window by a sign-change sweep plus bisection; each
    zero is post-checked simple (nonzero slope across the final bracket)."""
    with mpmath.workprec(prec + 16):
        lo, hi = to_mpf(window[0]), to_mpf(window[1])
        xs = [lo + (hi - lo) * i / grid for i in range(grid + 1)]
        vals = [eval_f(x, k, prec) for x in xs]
        zeros = []
        for i in range(grid):
            a, b = vals[i], vals[i + 1]
            if a == 0:
                continue  # grid point zero: resolved by neighboring bracket
            if a * b < 0:
                x0, x1 = xs[i], xs[i + 1]
                f0 = a
                for _ in range(prec + 8):
                    mid = (x0 + x1) / 2
                    fm = eval_f(mid, k, prec)
                    if fm == 0:
                        x0 = x1 = mid
                        break
                    if fm * f0 < 0:
                        x1 = mid
                    else:
                        x0, f0 = mid, fm
                    if x1 - x0 < mpmath.mpf(2) ** (-(prec // 2)):
                        break
                root = (x0 + x1) / 2
                h = mpmath.mpf("1e-6")
                slope = (eval_f(root + h, k, prec) - eval_f(root - h, k, prec)) / (2 * h)
                if slope == 0:
                    raise RuntimeError(f"zero at {root} is not numerically simple")
                zeros.append(+root)
        return zeros
