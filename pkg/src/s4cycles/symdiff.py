"""Differential algebra for the Wronskian chain.

Elements live in Q(sqrt2)(r) tensor span{1, u, w, uw} tensor span{1, I, J,
I^2, IJ, J^2} with u = sqrt(1-r), w = sqrt(1+r) and the closure rules

    I' = (I - J)/(2r),
    J' = (I - (1-r^2) J)/(2 r (1-r^2)),
    u' = -u/(2(1-r)),        w' = w/(2(1+r)).

Denominators of the rational-function coefficients stay in the factored form
r^a (1-r)^b (1+r)^c (never expanded), so the prefactors of the Wronskians are
recognized exactly.  Anything outside the fixed monomial basis is a hard
error: silent basis growth hides bugs.

The module recomputes the Wronskians W1..W6 of the ordered basis (g1..g6),
pushes them through the substitution r = (-1+6s^2-s^4)/(1+s^2)^2 (radical-free
by construction), extracts the polynomial coefficient pairs/triples of the
elliptic monomials, and rebuilds the degree-56 obstruction polynomial of the
Riccati identity for U = Z51/Z52 + v.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from .ellfun import eval_IJ, to_mpf
from .qfield import Sqrt2Rational, ZERO
from .qpoly import (
    ONE_MINUS_S2,
    ONE_PLUS_S2,
    P_MINUS,
    P_PLUS,
    QPoly,
    QPoly2,
    S_FACTOR,
    UnsupportedExpressionError,
    substitute_rs,
)


class MonomialBasisError(UnsupportedExpressionError):
    """Expression left the fixed monomial basis {1,u,w,uw} x {I,J degree <= 2}."""


class ShapeError(ValueError):
    """Expression does not have the expected elliptic-monomial shape."""


R_POLY = QPoly([0, 1])
ONE_MINUS_R = QPoly([1, -1])
ONE_PLUS_R = QPoly([1, 1])


# ---------------------------------------------------------------------------
# rational functions in r with factored denominators
# ---------------------------------------------------------------------------


class RatFunc:
    """num(r) / (r^er (1-r)^em (1+r)^ep), canonical: no cancellable factor."""

    __slots__ = ("num", "er", "em", "ep")

    def __init__(self, num: QPoly, er: int = 0, em: int = 0, ep: int = 0):
        if er < 0 or em < 0 or ep < 0:
            raise ValueError("denominator exponents must be nonnegative")

        # strip cancellable denominator factors (on the integer-primitive part;
        # rational content folds back after the loop)
        def strip(n, e, f):
            while e > 0 and not n.is_zero():
                q, rem = n.divmod(f)
                if not rem.is_zero():
                    break
                n, e = q, e - 1
            return n, e

        if num.is_zero():
            er = em = ep = 0
        else:
            content, prim = num.primitive()
            prim, er = strip(prim, er, R_POLY)
            prim, em = strip(prim, em, ONE_MINUS_R)
            prim, ep = strip(prim, ep, ONE_PLUS_R)
            num = prim * content
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "er", er)
        object.__setattr__(self, "em", em)
        object.__setattr__(self, "ep", ep)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def zero() -> "RatFunc":
        return _RF_ZERO

    @staticmethod
    def one() -> "RatFunc":
        return _RF_ONE

    @staticmethod
    def from_poly(p: QPoly) -> "RatFunc":
        return RatFunc(p)

    @staticmethod
    def simple(c, er: int = 0, em: int = 0, ep: int = 0) -> "RatFunc":
        return RatFunc(QPoly.constant(Sqrt2Rational.coerce(c)), er, em, ep)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num, self.er, self.em, self.ep) == \
            (other.num, other.er, other.em, other.ep)

    def __hash__(self):
        return hash((self.num, self.er, self.em, self.ep))

    def __add__(self, other: "RatFunc") -> "RatFunc":
        er = max(self.er, other.er)
        em = max(self.em, other.em)
        ep = max(self.ep, other.ep)
        n1 = self.num * _den_cofactor(er - self.er, em - self.em, ep - self.ep)
        n2 = other.num * _den_cofactor(er - other.er, em - other.em, ep - other.ep)
        return RatFunc(n1 + n2, er, em, ep)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.er, self.em, self.ep)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return RatFunc(self.num * other.num, self.er + other.er,
                           self.em + other.em, self.ep + other.ep)
        return RatFunc(self.num * other, self.er, self.em, self.ep)

    __rmul__ = __mul__

    def derivative(self) -> "RatFunc":
        n, a, b, c = self.num, self.er, self.em, self.ep
        out = n.derivative() * (R_POLY * ONE_MINUS_R * ONE_PLUS_R)
        if a:
            out = out - a * (n * (ONE_MINUS_R * ONE_PLUS_R))
        if b:
            out = out + b * (n * (R_POLY * ONE_PLUS_R))
        if c:
            out = out - c * (n * (R_POLY * ONE_MINUS_R))
        return RatFunc(out, a + 1, b + 1, c + 1)

    def eval_mpf(self, r):
        num = self.num.eval_mpf(r)
        den = r ** self.er * (1 - r) ** self.em * (1 + r) ** self.ep
        return num / den

    def __repr__(self):
        return f"RatFunc({self.num!r}, r^{self.er}, (1-r)^{self.em}, (1+r)^{self.ep})"


_RF_ZERO = RatFunc(QPoly.zero())
_RF_ONE = RatFunc(QPoly.one())


@lru_cache(maxsize=None)
def _den_cofactor(dr: int, dm: int, dp: int) -> QPoly:
    return (R_POLY ** dr) * (ONE_MINUS_R ** dm) * (ONE_PLUS_R ** dp)


# ---------------------------------------------------------------------------
# EllExpr
# ---------------------------------------------------------------------------

Key = Tuple[int, int, int, int]  # (u-exp, w-exp, I-exp, J-exp)


class EllExpr:
    """Element of the differential algebra; terms maps (du,dw,i,j) -> RatFunc."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Key, RatFunc]] = None):
        clean: Dict[Key, RatFunc] = {}
        for key, rf in (terms or {}).items():
            du, dw, i, j = key
            if du not in (0, 1) or dw not in (0, 1):
                raise MonomialBasisError(f"radical exponent out of basis: {key}")
            if i < 0 or j < 0 or i + j > 2:
                raise MonomialBasisError(f"elliptic degree out of basis: {key}")
            if not rf.is_zero():
                clean[key] = rf
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("EllExpr is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero() -> "EllExpr":
        return EllExpr()

    @staticmethod
    def from_rat(rf: RatFunc, key: Key = (0, 0, 0, 0)) -> "EllExpr":
        return EllExpr({key: rf})

    @staticmethod
    def from_poly(p: QPoly) -> "EllExpr":
        return EllExpr({(0, 0, 0, 0): RatFunc(p)})

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, EllExpr):
            return NotImplemented
        return self.terms == other.terms

    def elliptic_degree(self) -> int:
        return max((i + j for (_, _, i, j) in self.terms), default=0)

    def has_radicals(self) -> bool:
        return any(du or dw for (du, dw, _, _) in self.terms)

    def keys_elliptic(self) -> set:
        return {(i, j) for (_, _, i, j) in self.terms}

    # -- ring ops --------------------------------------------------------------

    def __add__(self, other: "EllExpr") -> "EllExpr":
        out = dict(self.terms)
        for key, rf in other.terms.items():
            cur = out.get(key)
            out[key] = rf if cur is None else cur + rf
        return EllExpr(out)

    def __neg__(self) -> "EllExpr":
        return EllExpr({k: -rf for k, rf in self.terms.items()})

    def __sub__(self, other: "EllExpr") -> "EllExpr":
        return self + (-other)

    def __mul__(self, other) -> "EllExpr":
        if not isinstance(other, EllExpr):
            return EllExpr({k: rf * other for k, rf in self.terms.items()})
        out: Dict[Key, RatFunc] = {}
        for (u1, w1, i1, j1), r1 in self.terms.items():
            for (u2, w2, i2, j2), r2 in other.terms.items():
                i, j = i1 + i2, j1 + j2
                if i + j > 2:
                    raise MonomialBasisError(
                        "product exceeds elliptic degree 2; outside the fixed basis")
                rf = r1 * r2
                u, w = u1 + u2, w1 + w2
                if u == 2:
                    rf = rf * ONE_MINUS_R
                    u = 0
                if w == 2:
                    rf = rf * ONE_PLUS_R
                    w = 0
                key = (u, w, i, j)
                cur = out.get(key)
                out[key] = rf if cur is None else cur + rf
        return EllExpr(out)

    __rmul__ = __mul__

    # -- calculus ---------------------------------------------------------------

    def derivative(self) -> "EllExpr":
        out: Dict[Key, RatFunc] = {}

        def acc(key: Key, rf: RatFunc):
            if rf.is_zero():
                return
            cur = out.get(key)
            out[key] = rf if cur is None else cur + rf

        half = Fraction(1, 2)
        for (du, dw, i, j), rf in self.terms.items():
            acc((du, dw, i, j), rf.derivative())
            if du:
                acc((du, dw, i, j), rf * RatFunc.simple(-half, em=1))
            if dw:
                acc((du, dw, i, j), rf * RatFunc.simple(half, ep=1))
            if i:
                # i I^{i-1} J^j (I-J)/(2r)
                acc((du, dw, i, j), rf * RatFunc.simple(Fraction(i, 2), er=1))
                acc((du, dw, i - 1, j + 1), rf * RatFunc.simple(-Fraction(i, 2), er=1))
            if j:
                # j I^i J^{j-1} (I - (1-r^2) J)/(2r(1-r^2))
                acc((du, dw, i + 1, j - 1),
                    rf * RatFunc.simple(Fraction(j, 2), er=1, em=1, ep=1))
                acc((du, dw, i, j), rf * RatFunc.simple(-Fraction(j, 2), er=1))
        return EllExpr(out)

    # -- numerics ----------------------------------------------------------------

    def eval_mpf(self, r, prec: int = 128):
        with mpmath.workprec(prec + 16):
            rv = to_mpf(r)
            pair = eval_IJ(rv, prec)
            u = mpmath.sqrt(1 - rv)
            w = mpmath.sqrt(1 + rv)
            total = mpmath.mpf(0)
            for (du, dw, i, j), rf in self.terms.items():
                total += rf.eval_mpf(rv) * u ** du * w ** dw * pair.I ** i * pair.J ** j
            return +total

    def __repr__(self):
        if not self.terms:
            return "EllExpr(0)"
        names = []
        for (du, dw, i, j), rf in sorted(self.terms.items()):
            mono = "".join(["u" * du, "w" * dw, "I" * i, "J" * j]) or "1"
            names.append(f"{mono}:{rf.num.degree}/( r^{rf.er}(1-r)^{rf.em}(1+r)^{rf.ep})")
        return "EllExpr{" + ", ".join(names) + "}"


# ---------------------------------------------------------------------------
# the g basis and its Wronskians
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def g_basis() -> Tuple[EllExpr, ...]:
    """(g1..g6) in the fixed order; the ECT candidate basis."""
    F = Fraction
    g1 = EllExpr.from_poly(R_POLY)
    g2 = EllExpr.from_poly(R_POLY * R_POLY)
    # g3 = 6 + (4r - 3 - r^2) u - (4r + 3 + r^2) w
    g3 = EllExpr({
        (0, 0, 0, 0): RatFunc(QPoly.constant(6)),
        (1, 0, 0, 0): RatFunc(QPoly([-3, 4, -1])),
        (0, 1, 0, 0): RatFunc(QPoly([-3, -4, -1])),
    })
    # g4 = -4 + (2 + 2r^2 - 5r + r^3) u + (2 + 2r^2 + 5r - r^3) w
    g4 = EllExpr({
        (0, 0, 0, 0): RatFunc(QPoly.constant(-4)),
        (1, 0, 0, 0): RatFunc(QPoly([2, -5, 2, 1])),
        (0, 1, 0, 0): RatFunc(QPoly([2, 5, 2, -1])),
    })
    # g5 = r(-5 + r^2) I + r(1 - r^2) J
    g5 = EllExpr({
        (0, 0, 1, 0): RatFunc(QPoly([0, -5, 0, 1])),
        (0, 0, 0, 1): RatFunc(QPoly([0, 1, 0, -1])),
    })
    # g6 = 4r I - r(1 - r^2) J
    g6 = EllExpr({
        (0, 0, 1, 0): RatFunc(QPoly([0, 4])),
        (0, 0, 0, 1): RatFunc(QPoly([0, -1, 0, 1])),
    })
    return g1, g2, g3, g4, g5, g6


@lru_cache(maxsize=8)
def derivative_table(n: int = 6) -> Tuple[Tuple[EllExpr, ...], ...]:
    """table[m][j] = d^m g_{j+1} / dr^m for m, j < n."""
    basis = g_basis()[:n]
    rows = [tuple(basis)]
    for _ in range(n - 1):
        rows.append(tuple(e.derivative() for e in rows[-1]))
    return tuple(rows)


def wronskian(basis: Sequence[EllExpr], order: int) -> EllExpr:
    """W_order: determinant of (g_j^{(m)}), m = 0..order-1, j = 0..order-1.

    `basis` must be the ordered tuple (g1..g6) (or a prefix/replacement of the
    same length used by the negative controls).
    """
    if not 1 <= order <= len(basis):
        raise ValueError("order out of range")
    rows = [list(basis[:order])]
    for _ in range(order - 1):
        rows.append([e.derivative() for e in rows[-1]])
    memo: Dict[Tuple[Tuple[int, ...], int], EllExpr] = {}

    def det(row_idx: Tuple[int, ...], ncols: int) -> EllExpr:
        if ncols == 0:
            return EllExpr.from_poly(QPoly.one())
        key = (row_idx, ncols)
        got = memo.get(key)
        if got is not None:
            return got
        col = ncols - 1
        total = EllExpr.zero()
        for pos, ri in enumerate(row_idx):
            entry = rows[ri][col]
            if entry.is_zero():
                continue
            minor = det(row_idx[:pos] + row_idx[pos + 1:], ncols - 1)
            term = entry * minor
            if (len(row_idx) - 1 - pos) % 2 == 1:
                term = -term
            total = total + term
        memo[key] = total
        return total

    return det(tuple(range(order)), order)


@lru_cache(maxsize=8)
def wronskians(n: int = 6) -> Tuple[EllExpr, ...]:
    """All leading-principal Wronskians W_1..W_n of (g1..g6), cached."""
    basis = g_basis()
    return tuple(wronskian(basis, i) for i in range(1, n + 1))


# ---------------------------------------------------------------------------
# push-through to the s variable
# ---------------------------------------------------------------------------

S_DENOM_NAMES = ("s", "1-s^2", "1+s^2", "1+2s-s^2", "1-2s-s^2")
S_DENOM_POLYS = (S_FACTOR, ONE_MINUS_S2, ONE_PLUS_S2, P_PLUS, P_MINUS)


class SRat:
    """scale * num(s) / (s^a (1-s^2)^b (1+s^2)^c (1+2s-s^2)^d (1-2s-s^2)^e).

    Canonical: num integer-primitive with positive leading sign (the rational
    content and sign live in `scale`), and no denominator factor divides num.
    Keeping the polynomial part over plain integers makes the deep
    common-denominator additions of to_s() cheap.
    """

    __slots__ = ("num", "scale", "exps")

    def __init__(self, num: QPoly, exps: Tuple[int, int, int, int, int],
                 scale: Fraction = Fraction(1)):
        exps = list(exps)
        if num.is_zero():
            object.__setattr__(self, "num", num)
            object.__setattr__(self, "scale", Fraction(1))
            object.__setattr__(self, "exps", (0,) * 5)
            return
        content, num = num.primitive()
        scale = Fraction(scale) * content
        if num.leading().sign() < 0:
            num = -num
            scale = -scale
        for idx, f in enumerate(S_DENOM_POLYS):
            while exps[idx] > 0:
                q, rem = num.divmod(f)
                if not rem.is_zero():
                    break
                num = q
                exps[idx] -= 1
        # unit-leading divisors keep quotients integral; re-primitive is cheap
        content, num = num.primitive()
        scale *= content
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "exps", tuple(exps))

    def __setattr__(self, name, value):
        raise AttributeError("SRat is immutable")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, SRat):
            return NotImplemented
        return self.num == other.num and self.scale == other.scale and \
            self.exps == other.exps

    def __add__(self, other: "SRat") -> "SRat":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        target = tuple(max(a, b) for a, b in zip(self.exps, other.exps))
        n1, n2 = self.num, other.num
        for idx, f in enumerate(S_DENOM_POLYS):
            d1 = target[idx] - self.exps[idx]
            d2 = target[idx] - other.exps[idx]
            if d1:
                n1 = n1 * f ** d1
            if d2:
                n2 = n2 * f ** d2
        # common scale keeping both contributions integral
        s1, s2 = self.scale, other.scale
        from math import gcd as igcd

        s0 = Fraction(igcd(s1.numerator * s2.denominator,
                           s2.numerator * s1.denominator),
                      s1.denominator * s2.denominator)
        return SRat(n1 * (s1 / s0) + n2 * (s2 / s0), target, s0)

    def __neg__(self) -> "SRat":
        out = object.__new__(SRat)
        object.__setattr__(out, "num", self.num)
        object.__setattr__(out, "scale", -self.scale)
        object.__setattr__(out, "exps", self.exps)
        return out

    def scaled_num(self) -> QPoly:
        return self.num * self.scale

    def eval_mpf(self, s):
        den = mpmath.mpf(1)
        for e, f in zip(self.exps, S_DENOM_POLYS):
            if e:
                den *= f.eval_mpf(s) ** e
        sc = mpmath.mpf(self.scale.numerator) / self.scale.denominator
        return sc * self.num.eval_mpf(s) / den

    def __repr__(self):
        den = " ".join(f"({n})^{e}" for n, e in zip(S_DENOM_NAMES, self.exps) if e)
        return f"SRat({self.scale} * deg {self.num.degree} / {den or '1'})"


class SExpr:
    """Radical-free image of an EllExpr under r -> r(s): terms keyed by the
    elliptic exponents (i, j) with SRat coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Tuple[int, int], SRat]] = None):
        clean = {k: v for k, v in (terms or {}).items() if not v.is_zero()}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SExpr is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def keys(self):
        return set(self.terms)

    def eval_mpf(self, s, prec: int = 128):
        with mpmath.workprec(prec + 16):
            sv = to_mpf(s)
            rv = (-1 + 6 * sv ** 2 - sv ** 4) / (1 + sv ** 2) ** 2
            pair = eval_IJ(rv, prec)
            total = mpmath.mpf(0)
            for (i, j), sr in self.terms.items():
                total += sr.eval_mpf(sv) * pair.I ** i * pair.J ** j
            return +total


def to_s(e: EllExpr) -> SExpr:
    """Exact substitution r -> (-1+6s^2-s^4)/(1+s^2)^2; radicals disappear via
    sqrt(1-r) = sqrt2 (1-s^2)/(1+s^2), sqrt(1+r) = 2 sqrt2 s/(1+s^2)."""
    out: Dict[Tuple[int, int], SRat] = {}
    for (du, dw, i, j), rf in e.terms.items():
        num_s, k = substitute_rs(rf.num, u_power=du, w_power=dw)
        a, b, c = rf.er, rf.em, rf.ep
        # 1/r^a = (-1)^a (1+s^2)^{2a} / ((1+2s-s^2)^a (1-2s-s^2)^a)
        # 1/(1-r)^b = (1+s^2)^{2b} / (2^b (1-s^2)^{2b})
        # 1/(1+r)^c = (1+s^2)^{2c} / (8^c s^{2c})
        scale = Fraction((-1) ** a, 2 ** b * 8 ** c)
        gamma = k - 2 * a - 2 * b - 2 * c
        if gamma < 0:
            num_s = num_s * ONE_PLUS_S2 ** (-gamma)
            gamma = 0
        sr = SRat(num_s, (2 * c, 2 * b, gamma, a, a), scale)
        key = (i, j)
        cur = out.get(key)
        out[key] = sr if cur is None else cur + sr
    return SExpr(out)


# ---------------------------------------------------------------------------
# extraction of the polynomial pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrefactorRecord:
    """The rational-function prefactor pulled out of a transformed Wronskian:
    scalar * shared_poly(s) / product(denominator factors^exps)."""

    scalar: Fraction
    shared_poly: QPoly
    denom_exps: Tuple[int, int, int, int, int]


@dataclass(frozen=True)
class W5Data:
    z51: QPoly
    z52: QPoly
    prefactor: PrefactorRecord


@dataclass(frozen=True)
class W6Data:
    z61: QPoly
    z62: QPoly
    z63: QPoly
    prefactor: PrefactorRecord


_PROBE = Fraction(7, 10)  # interior rational point for sign conventions

# the shared rational-function content of the transformed Wronskian
# coefficient families factors over exactly these small polynomials: the
# structural denominators and their Q(sqrt2)-linear splittings
# (1-2s-s^2 = -(s-(sqrt2-1))(s+sqrt2+1), 1+2s-s^2 = -(s-(sqrt2+1))(s+sqrt2-1),
# 1-s^2 = (1-s)(1+s)); a general big-coefficient gcd is never needed here
_SQ2M1 = Sqrt2Rational(-1, 1)
_SQ2P1 = Sqrt2Rational(1, 1)
_COMMON_FACTORS: Tuple[Tuple[str, QPoly], ...] = (
    ("s", S_FACTOR),
    ("1-s", QPoly([1, -1])),
    ("1+s", QPoly([1, 1])),
    ("1+s^2", ONE_PLUS_S2),
    ("s-(sqrt2-1)", QPoly([-_SQ2M1, Sqrt2Rational(1)])),
    ("s+(sqrt2-1)", QPoly([_SQ2M1, Sqrt2Rational(1)])),
    ("s-(sqrt2+1)", QPoly([-_SQ2P1, Sqrt2Rational(1)])),
    ("s+(sqrt2+1)", QPoly([_SQ2P1, Sqrt2Rational(1)])),
)


def _strip_common_factors(nums: List[QPoly]) -> Tuple[List[QPoly], Dict[str, int]]:
    """Divide the whole family by every small factor dividing all members."""
    nums = list(nums)
    counts: Dict[str, int] = {}
    for name, f in _COMMON_FACTORS:
        while True:
            if f.degree == 1:  # cheap root test before attempting division
                root = -f.coeff(0)
                if any(not n(root).is_zero() for n in nums):
                    break
            qs = []
            ok = True
            for n in nums:
                q, rem = n.divmod(f)
                if not rem.is_zero():
                    ok = False
                    break
                qs.append(q)
            if not ok:
                break
            nums = qs
            counts[name] = counts.get(name, 0) + 1
    return nums, counts


def _joint_normalize(nums: List[QPoly], sign_poly_idx: int) -> Tuple[List[QPoly], Dict[str, int]]:
    """Strip the shared small-factor content and the joint rational content;
    flip signs so nums[sign_poly_idx](7/10) < 0."""
    reduced, counts = _strip_common_factors(nums)
    from math import gcd as igcd

    contents = [n.primitive()[0] for n in reduced]
    joint = contents[0]
    for c in contents[1:]:
        # gcd of positive rationals
        joint = Fraction(igcd(joint.numerator * c.denominator,
                              c.numerator * joint.denominator),
                         joint.denominator * c.denominator)
    out = [n * (1 / joint) for n in reduced]
    probe = out[sign_poly_idx](_PROBE)
    if probe.sign() > 0:
        out = [-n for n in out]
    elif probe.sign() == 0:
        raise ShapeError("sign-convention probe hit a root; adjust probe point")
    return out, counts


def extract_w5(se: SExpr) -> W5Data:
    """Split to_s(W5) into prefactor * (Z51 I + Z52 J) with (Z51, Z52) the
    coprime integer-primitive pair, sign fixed by Z52(7/10) < 0."""
    if se.keys() != {(1, 0), (0, 1)}:
        raise ShapeError(f"W5 image should be linear in I, J; keys {se.keys()}")
    nums, target = _common_denominator([se.terms[(1, 0)], se.terms[(0, 1)]])
    (z51, z52), _ = _joint_normalize(nums, sign_poly_idx=1)
    shared = nums[0].exact_div(z51)  # the pulled-out rational-function content
    return W5Data(z51, z52, PrefactorRecord(Fraction(1), shared, target))


def _common_denominator(parts: List[SRat]) -> Tuple[List[QPoly], Tuple[int, ...]]:
    """Numerators of a family of SRats over their joint denominator, with the
    rational scales folded in as integers (common scale extracted)."""
    from math import gcd as igcd

    target = tuple(max(p.exps[i] for p in parts) for i in range(5))
    scales = [p.scale for p in parts]
    s0 = scales[0]
    for s in scales[1:]:
        s0 = Fraction(igcd(s0.numerator * s.denominator, s.numerator * s0.denominator),
                      s0.denominator * s.denominator)
    nums = []
    for p in parts:
        n = p.num * (p.scale / s0)
        for idx, f in enumerate(S_DENOM_POLYS):
            d = target[idx] - p.exps[idx]
            if d:
                n = n * f ** d
        nums.append(n)
    return nums, target


def extract_w6(se: SExpr) -> W6Data:
    """Split to_s(W6) into prefactor * (Z61 I^2 + Z62 I J + Z63 J^2), the
    coprime integer-primitive triple, sign fixed by Z63(7/10) < 0."""
    if se.keys() != {(2, 0), (1, 1), (0, 2)}:
        raise ShapeError(f"W6 image should be quadratic in I, J; keys {se.keys()}")
    nums, target = _common_denominator(
        [se.terms[(2, 0)], se.terms[(1, 1)], se.terms[(0, 2)]])
    (z61, z62, z63), _ = _joint_normalize(nums, sign_poly_idx=2)
    shared = nums[0].exact_div(z61)
    return W6Data(z61, z62, z63, PrefactorRecord(Fraction(1), shared, target))


# ---------------------------------------------------------------------------
# the Riccati identity for U = Z51/Z52 + v and its obstruction polynomial
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RiccatiData:
    """dU/ds = c2 U^2 + c1 U + c0 with c0 = -36 (1-2s-s^2)(1+s^2)^3(1+2s-s^2)^3
    * zbar / Z52^2; each c_i is (numerator QPoly, denominator QPoly)."""

    zbar: QPoly
    c2: Tuple[QPoly, QPoly]
    c1: Tuple[QPoly, QPoly]
    c0: Tuple[QPoly, QPoly]

    def eval_c(self, which: int, s, prec: int = 128):
        num, den = (self.c2, self.c1, self.c0)[2 - which]
        with mpmath.workprec(prec + 16):
            sv = to_mpf(s)
            return num.eval_mpf(sv) / den.eval_mpf(sv)


# ds/dtheta-style flow denominators reused across the tangency system
def sdot_poly() -> QPoly:
    """2 s (-1 + s^4)(1 - 6 s^2 + s^4)."""
    return QPoly([0, 2]) * QPoly([-1, 0, 0, 0, 1]) * QPoly([1, 0, -6, 0, 1])


def vdot_poly2() -> QPoly2:
    """(1+s^2)^4 - 32 s^2 (1-s^2)^2 v + 16 s^2 (1-s^2)^2 v^2."""
    s2m = S_FACTOR * S_FACTOR * ONE_MINUS_S2 * ONE_MINUS_S2
    return QPoly2([ONE_PLUS_S2 ** 4, s2m * (-32), s2m * 16])


def build_U_dU(z51: QPoly, z52: QPoly) -> RiccatiData:
    """Recompute the obstruction polynomial zbar (degree 56) from the pair
    (Z51, Z52) and return the full Riccati right side for U' = d/ds (Z51/Z52 + v)."""
    D = sdot_poly()
    wnum = z51.derivative() * z52 - z51 * z52.derivative()
    quad = (ONE_PLUS_S2 ** 4) * (z52 * z52) \
        + (S_FACTOR ** 2 * ONE_MINUS_S2 ** 2) * (z51 * z52) * 32 \
        + (S_FACTOR ** 2 * ONE_MINUS_S2 ** 2) * (z51 * z51) * 16
    N = D * wnum + quad
    pref = P_MINUS * ONE_PLUS_S2 ** 3 * P_PLUS ** 3
    zbar = (-N).exact_div(pref * D * 36)
    # c2 = -8(s - s^3) / ((1+s^2)(1-6s^2+s^4))
    s_minus_s3 = QPoly([0, 1, 0, -1])
    c2 = ((-8) * s_minus_s3, ONE_PLUS_S2 * QPoly([1, 0, -6, 0, 1]))
    c1 = (16 * s_minus_s3 * (z51 + z52),
          ONE_PLUS_S2 * QPoly([1, 0, -6, 0, 1]) * z52)
    c0 = ((-36) * pref * zbar, z52 * z52)
    return RiccatiData(zbar, c2, c1, c0)


# ---------------------------------------------------------------------------
# tangency system for the quadratic curve Psi = 0
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TangencyData:
    psi: QPoly2            # Z61 + Z62 v + Z63 v^2
    phi_full: QPoly2       # grad(Psi) . (sdot, vdot), cubic in v
    phis: Tuple[QPoly, QPoly, QPoly, QPoly]  # phi_0..phi_3 after removing 4s(1-s^2)


def tangency_system(z61: QPoly, z62: QPoly, z63: QPoly) -> TangencyData:
    psi = QPoly2([z61, z62, z63])
    phi_full = psi.derivative_s() * sdot_poly() + psi.derivative_v() * vdot_poly2()
    strip = S_FACTOR * ONE_MINUS_S2 * 4
    phis = tuple(c.exact_div(strip) for c in phi_full.coeffs_v)
    if len(phis) != 4:
        raise ShapeError(f"tangency polynomial has v-degree {len(phis)-1}, want 3")
    return TangencyData(psi, phi_full, phis)


# ---------------------------------------------------------------------------
# finite-difference oracle for the Wronskians (tests)
# ---------------------------------------------------------------------------


def numeric_wronskian(order: int, r, prec: int = 320, h: str = "1e-8",
                      basis: Optional[Sequence[EllExpr]] = None):
    """W_order at r by iterated central differences of the g-basis values;
    independent of the symbolic derivative rules."""
    basis = list(g_basis() if basis is None else basis)[:order]
    with mpmath.workprec(prec + 32):
        rv = to_mpf(r)
        hv = mpmath.mpf(h)

        def nth(e: EllExpr, m: int, x):
            if m == 0:
                return e.eval_mpf(x, prec)
            return (nth(e, m - 1, x + hv) - nth(e, m - 1, x - hv)) / (2 * hv)

        M = mpmath.matrix(order, order)
        for m in range(order):
            for jdx in range(order):
                M[m, jdx] = nth(basis[jdx], m, rv)
        return mpmath.det(M)
