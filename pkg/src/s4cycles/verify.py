"""Assembled ECT certificate for the ordered basis (g1..g6) on (0,1).

The certification splits every claim into the largest possible exact part
(Sturm counts and exact rational-point evaluations over Q(sqrt2)) and a
minimal numeric remainder (the elliptic-integral comparisons), which is
labeled high-confidence, non-rigorous in the report:

  1. W1 = r and W2 = r^2 exactly (structural identities).
  2. W3(s), W4(s) are root-free on (sqrt2-1, 1): Sturm on the recomputed
     numerators.
  3. W5: Z52 < 0 and the degree-56 obstruction polynomial zbar < 0 by Sturm;
     U(s) = Z51/Z52 + v(s) < 0 on a dense grid; endpoint expansions of U
     and the quartic expansion of v matched numerically.
  4. W6: Z63 < 0, discriminant > 0, phi3 < 0 by Sturm; the tangency
     resultant has exactly one simple root; branch ordering
     v_-(s) > v(s) > v_+(s) on the grid with positive margins.

Spot values transcribed from the published certificate polynomials are kept
as fixtures and compared (up to one shared scalar per family) against the
recomputed polynomials; nothing longer than a handful of coefficients is
ever transcribed.
"""

from __future__ import annotations

import hashlib
import json
import os
import pickle
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from . import symdiff
from .ellfun import eval_v, to_mpf
from .qfield import SQRT2_M1, Sqrt2Rational
from .qpoly import (
    ONE_MINUS_S2,
    ONE_PLUS_S2,
    P_MINUS,
    P_PLUS,
    QPoly,
    RootInterval,
    S_FACTOR,
    SturmChain,
    certify_structural_factors,
    read_spot_fixture,
    remove_structural_content,
    resultant_v,
    sturm_count,
)

PIPELINE_VERSION = "s4cycles-pipeline-v1"
_S_HI = Sqrt2Rational(1)
_PROBE = Fraction(7, 10)


# ---------------------------------------------------------------------------
# report containers
# ---------------------------------------------------------------------------


@dataclass
class GridConfig:
    """Grid and precision policy for the numeric remainder of the certificate."""

    points: int = 10_000
    precision: int = 192
    standoff: float = 1e-8  # distance from each endpoint of (sqrt2-1, 1)

    def __post_init__(self):
        if self.standoff <= 0:
            raise ValueError("standoff must be positive")
        if self.points < 16:
            raise ValueError("need at least 16 grid points")


@dataclass
class CheckResult:
    name: str
    method: str  # "exact" | "sturm" | "fixture" | "numeric-grid" | "asymptotic"
    statement: str
    verdict: bool
    margin: Optional[float] = None
    seconds: float = 0.0

    def as_dict(self, with_timing: bool = True) -> Dict:
        out = {
            "name": self.name,
            "method": self.method,
            "statement": self.statement,
            "verdict": "pass" if self.verdict else "fail",
            "margin": self.margin,
        }
        if with_timing:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class CertificateReport:
    checks: List[CheckResult]
    config: GridConfig
    notes: List[str] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.verdict for c in self.checks)

    def to_json(self, with_timing: bool = True) -> str:
        payload = {
            "checks": [c.as_dict(with_timing) for c in self.checks],
            "overall": "pass" if self.overall else "fail",
            "config": {
                "points": self.config.points,
                "precision": self.config.precision,
                "standoff": self.config.standoff,
            },
            "notes": self.notes,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def canonical_json(self) -> str:
        """Deterministic form: wall-clock timings stripped."""
        return self.to_json(with_timing=False)


# ---------------------------------------------------------------------------
# the symbolic pipeline (cached: in-process and optionally on disk)
# ---------------------------------------------------------------------------


@dataclass
class SymbolicData:
    """Everything the certificate consumes, recomputed from the g basis."""

    w3_numerator: QPoly
    w4_numerator: QPoly
    z51: QPoly
    z52: QPoly
    z61: QPoly
    z62: QPoly
    z63: QPoly
    zbar: QPoly
    delta: QPoly            # z62^2 - 4 z61 z63
    delta_inner: QPoly      # delta with structural content removed
    phis: Tuple[QPoly, QPoly, QPoly, QPoly]
    resultant: QPoly        # res_v(Psi, Phi), degree 250
    resultant_inner: QPoly  # structural content removed, degree 180
    resultant_factors: Dict[str, int]


_PIPELINE_SINGLETON: Optional[SymbolicData] = None


def _cache_path() -> Optional[Path]:
    if os.environ.get("S4CYCLES_NO_CACHE"):
        return None
    base = os.environ.get("S4CYCLES_CACHE_DIR") or \
        os.path.join(os.path.expanduser("~"), ".cache", "s4cycles")
    return Path(base) / f"{PIPELINE_VERSION}.pkl"


def symbolic_pipeline(use_disk_cache: bool = True) -> SymbolicData:
    """Recompute (or load) the full symbolic chain: Wronskians -> s-images ->
    coefficient polynomials -> obstruction/tangency polynomials -> resultant.

    The computation is deterministic; the disk cache is pure memoization.
    """
    global _PIPELINE_SINGLETON
    if _PIPELINE_SINGLETON is not None:
        return _PIPELINE_SINGLETON
    path = _cache_path() if use_disk_cache else None
    if path is not None and path.exists():
        try:
            with open(path, "rb") as fh:
                data = pickle.load(fh)
            if isinstance(data, SymbolicData):
                _PIPELINE_SINGLETON = data
                return data
        except Exception:
            pass  # stale/corrupt cache: recompute
    data = _compute_pipeline()
    _PIPELINE_SINGLETON = data
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            pickle.dump(data, fh)
        os.replace(tmp, path)
    return data


def _compute_pipeline() -> SymbolicData:
    W = symdiff.wronskians(6)
    s3 = symdiff.to_s(W[2])
    s4 = symdiff.to_s(W[3])
    if s3.keys() != {(0, 0)} or s4.keys() != {(0, 0)}:
        raise symdiff.ShapeError("W3/W4 images must be free of elliptic monomials")
    d5 = symdiff.extract_w5(symdiff.to_s(W[4]))
    d6 = symdiff.extract_w6(symdiff.to_s(W[5]))
    ric = symdiff.build_U_dU(d5.z51, d5.z52)
    tan = symdiff.tangency_system(d6.z61, d6.z62, d6.z63)
    delta = d6.z62 * d6.z62 - 4 * (d6.z61 * d6.z63)
    delta_inner, _ = remove_structural_content(delta)
    res = resultant_v(tan.psi, tan.phi_full)
    res_inner, factors = remove_structural_content(res)
    return SymbolicData(
        w3_numerator=s3.terms[(0, 0)].num,
        w4_numerator=s4.terms[(0, 0)].num,
        z51=d5.z51, z52=d5.z52,
        z61=d6.z61, z62=d6.z62, z63=d6.z63,
        zbar=ric.zbar,
        delta=delta, delta_inner=delta_inner,
        phis=tan.phis,
        resultant=res, resultant_inner=res_inner, resultant_factors=factors,
    )


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

# structural prefactor of each recomputed polynomial, matching the layout of
# the transcribed spot values (spots are for the deep factor on the right)
_FIXTURE_STRUCTURE: Dict[str, Tuple[str, "QPoly"]] = {}


def _fixture_prefactors() -> Dict[str, QPoly]:
    s = S_FACTOR
    one_m = QPoly([1, -1])
    one_p = QPoly([1, 1])
    return {
        "z51": ONE_PLUS_S2 ** 2,
        "z52": 4 * (s * one_m * one_p),
        "z61": ONE_PLUS_S2 ** 4,
        "z62": 8 * (s * ONE_MINUS_S2) * ONE_PLUS_S2 ** 2,
        "z63": 16 * (s ** 2) * ONE_MINUS_S2 ** 2,
        "zbar": QPoly.one(),
        "delta": 11520 * (s ** 2) * ONE_MINUS_S2 ** 2 * ONE_PLUS_S2 ** 4 * P_PLUS ** 4,
        "phi0": ONE_PLUS_S2 ** 4,
        "resultant": 1592524800 * (s ** 6) * P_MINUS ** 4 * ONE_MINUS_S2 ** 6
        * ONE_PLUS_S2 ** 10 * P_PLUS ** 12,
    }


def _load_spots(name: str) -> Dict[int, Sqrt2Rational]:
    ref = resources.files("s4cycles") / "fixtures" / f"{name}_spots.txt"
    with resources.as_file(ref) as path:
        return read_spot_fixture(path)


def check_fixture(name: str, recomputed: QPoly,
                  tamper: bool = False) -> Tuple[bool, Optional[Fraction], str]:
    """Compare recomputed polynomial spots against the transcribed reference.

    The recomputed polynomial must factor as prefactor * inner with the inner
    coefficients proportional (one shared lambda) to the reference spots.
    Returns (ok, lambda, message).
    """
    spots = _load_spots(name)
    pre = _fixture_prefactors()[name]
    try:
        inner = recomputed.exact_div(pre)
    except ValueError:
        return False, None, f"{name}: structural prefactor does not divide"
    if tamper:
        # test hook: corrupt one transcribed value before comparison
        k = next(iter(spots))
        spots[k] = spots[k] + Sqrt2Rational(1)
    first_k = min(spots)
    ref0 = spots[first_k]
    ours0 = inner.coeff(first_k)
    if ref0.is_zero() or ours0.is_zero():
        return False, None, f"{name}: degenerate anchor coefficient"
    lam = ours0 / ref0
    if not lam.b == 0:
        return False, None, f"{name}: scale between recomputation and reference " \
                            f"is not rational ({lam})"
    for k, ref in spots.items():
        if inner.coeff(k) != ref * lam:
            return False, Fraction(lam.a), \
                f"{name}: spot s^{k} mismatch (lambda={lam.a})"
    return True, Fraction(lam.a), f"{name}: {len(spots)} spots match, lambda={lam.a}"


# ---------------------------------------------------------------------------
# grid helpers
# ---------------------------------------------------------------------------


def s_grid(cfg: GridConfig):
    """Points in (sqrt2-1, 1), uniform core with log-densified endpoint stacks."""
    with mpmath.workprec(cfg.precision + 16):
        left = mpmath.sqrt(2) - 1
        right = mpmath.mpf(1)
        span = right - left
        off = mpmath.mpf(cfg.standoff)
        n_stack = max(8, cfg.points // 20)
        n_core = cfg.points - 2 * n_stack
        pts = []
        # geometric stacks: standoff .. span/8
        ratio = (span / 8 / off) ** (mpmath.mpf(1) / (n_stack - 1))
        d = off
        for _ in range(n_stack):
            pts.append(left + d)
            pts.append(right - d)
            d *= ratio
        for i in range(n_core):
            pts.append(left + span * (i + mpmath.mpf("0.5")) / n_core)
        pts.sort()
        return pts


def _poly_ratio(num: QPoly, den: QPoly, s):
    return num.eval_mpf(s) / den.eval_mpf(s)


# ---------------------------------------------------------------------------
# the certificate
# ---------------------------------------------------------------------------


_NONRIGOROUS_NOTE = (
    "numeric-grid and asymptotic checks are high-confidence, non-rigorous: "
    "they involve elliptic-integral values evaluated at {prec} bits; all "
    "polynomial facts are certified exactly by Sturm counts over Q(sqrt2)")

_CONTRADICTION_NOTE = (
    "the sign certificates feed a descent argument: a zero of U on the open "
    "interval would force U'(s0) < 0 there (obstruction polynomial negative), "
    "while the endpoint expansions of U make a first zero arrive from below "
    "with U'(s0) >= 0; the contradiction itself is logical, not computed")


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _sign_certificate(name: str, poly: QPoly, want_negative: bool) -> CheckResult:
    """Sturm-exact sign-definiteness of poly on the open interval: root-free
    plus one exact rational-point sign evaluation."""
    def run():
        inner, _ = remove_structural_content(poly)
        roots = sturm_count(inner, SQRT2_M1, _S_HI)
        probe = poly(Sqrt2Rational(_PROBE)).sign()
        ok = roots == 0 and (probe < 0 if want_negative else probe > 0)
        return ok, roots, probe
    (ok, roots, probe), dt = _timed(run)
    rel = "< 0" if want_negative else "> 0"
    return CheckResult(
        name=name, method="sturm",
        statement=f"{name} {rel} on (sqrt2-1, 1): interior roots {roots}, "
                  f"sign at 7/10 is {probe}",
        verdict=ok, margin=None, seconds=dt)


def certify_ect(cfg: Optional[GridConfig] = None, tamper: Optional[str] = None,
                basis_override: Optional[Sequence] = None) -> CertificateReport:
    """Run the full certification; collects every failure rather than stopping.

    tamper: name of a fixture to corrupt (test hook, e.g. "z52").
    basis_override: replacement 6-tuple of basis elements (negative controls).
    """
    cfg = cfg or GridConfig()
    checks: List[CheckResult] = []

    if basis_override is not None:
        return _certify_override_basis(cfg, basis_override)

    data = symbolic_pipeline()

    # (0) structural denominators are root-free on the open interval
    def run_struct():
        counts = certify_structural_factors()
        return all(v == 0 for v in counts.values())
    ok, dt = _timed(run_struct)
    checks.append(CheckResult(
        "structural_factors", "sturm",
        "all structural denominator factors are root-free on (sqrt2-1, 1)",
        ok, None, dt))

    # (1) W1 = r, W2 = r^2 exactly
    def run_w12():
        W = symdiff.wronskians(2)
        r = symdiff.EllExpr.from_poly(symdiff.R_POLY)
        r2 = symdiff.EllExpr.from_poly(symdiff.R_POLY * symdiff.R_POLY)
        return W[0] == r and W[1] == r2
    ok, dt = _timed(run_w12)
    checks.append(CheckResult(
        "w1_w2_exact", "exact", "W1 = r and W2 = r^2 as differential-algebra "
        "identities; both positive on (0,1)", ok, None, dt))

    # (2) W3, W4 root-free via Sturm on the recomputed numerators
    for nm, num in (("w3", data.w3_numerator), ("w4", data.w4_numerator)):
        def run_w(num=num):
            return sturm_count(num, SQRT2_M1, _S_HI)
        n, dt = _timed(run_w)
        checks.append(CheckResult(
            f"{nm}_root_free", "sturm",
            f"{nm.upper()}(s) numerator has no root in (sqrt2-1, 1)",
            n == 0, None, dt))

    # (2b) the displayed endpoint-factor structure of W3
    def run_w3_factor():
        left_lin = QPoly([-SQRT2_M1, Sqrt2Rational(1)])
        p = data.w3_numerator
        for _ in range(4):
            q, rem = p.divmod(left_lin)
            if not rem.is_zero():
                return False
            p = q
        return not p(SQRT2_M1).is_zero()
    ok, dt = _timed(run_w3_factor)
    checks.append(CheckResult(
        "w3_endpoint_factor", "exact",
        "W3 numerator carries (s - (sqrt2-1))^4 exactly (multiplicity 4)",
        ok, None, dt))

    # (3) fixture spot checks
    for nm, poly in (("z51", data.z51), ("z52", data.z52), ("z61", data.z61),
                     ("z62", data.z62), ("z63", data.z63), ("zbar", data.zbar),
                     ("delta", data.delta), ("phi0", data.phis[0]),
                     ("resultant", data.resultant)):
        def run_fix(nm=nm, poly=poly):
            return check_fixture(nm, poly, tamper=(tamper == nm))
        (okf, lam, msg), dt = _timed(run_fix)
        checks.append(CheckResult(
            f"fixture_{nm}", "fixture", msg, okf,
            None, dt))

    # (3b) degree of the obstruction polynomial
    checks.append(CheckResult(
        "zbar_degree", "exact",
        f"recomputed obstruction polynomial has degree {data.zbar.degree}",
        data.zbar.degree == 56, None, 0.0))

    # (4) Sturm sign certificates
    checks.append(_sign_certificate("z52", data.z52, want_negative=True))
    checks.append(_sign_certificate("zbar", data.zbar, want_negative=True))
    checks.append(_sign_certificate("z63", data.z63, want_negative=True))
    checks.append(_sign_certificate("delta", data.delta, want_negative=False))
    checks.append(_sign_certificate("phi3", data.phis[3], want_negative=True))

    # (5) resultant: unique simple root
    def run_res():
        chain = SturmChain(data.resultant_inner)
        count = chain.count(SQRT2_M1, _S_HI)
        squarefree = chain.is_squarefree()
        return count, squarefree
    (count, squarefree), dt = _timed(run_res)
    checks.append(CheckResult(
        "resultant_unique_simple_root", "sturm",
        f"structure-stripped tangency resultant (degree "
        f"{data.resultant_inner.degree}) has {count} root(s) in (sqrt2-1, 1); "
        f"gcd with derivative is constant: {squarefree}",
        count == 1 and squarefree, None, dt))

    # (6) numeric grid: U < 0 and branch ordering v- > v > v+
    def run_grid():
        pts = s_grid(cfg)
        with mpmath.workprec(cfg.precision + 16):
            u_max = mpmath.mpf("-inf")
            lower_margin = mpmath.mpf("inf")
            upper_margin = mpmath.mpf("inf")
            vieta_worst = mpmath.mpf(0)
            for s in pts:
                v = eval_v(s, cfg.precision)
                u = _poly_ratio(data.z51, data.z52, s) + v
                u_max = max(u_max, u)
                z61 = data.z61.eval_mpf(s)
                z62 = data.z62.eval_mpf(s)
                z63 = data.z63.eval_mpf(s)
                disc = z62 * z62 - 4 * z61 * z63
                sq = mpmath.sqrt(disc)
                v_plus = (-z62 + sq) / (2 * z63)
                v_minus = (-z62 - sq) / (2 * z63)
                lower_margin = min(lower_margin, v_minus - v)
                upper_margin = min(upper_margin, v - v_plus)
                vieta_worst = max(
                    vieta_worst,
                    abs(v_plus * v_minus - z61 / z63),
                    abs(v_plus + v_minus + z62 / z63))
            return u_max, lower_margin, upper_margin, vieta_worst
    (u_max, lo_m, hi_m, vieta), dt = _timed(run_grid)
    eval_err = 10.0 * 2.0 ** (-(cfg.precision - 12))
    checks.append(CheckResult(
        "u_negative_grid", "numeric-grid",
        f"U(s) < 0 on {cfg.points} points (max U = {mpmath.nstr(u_max, 8)})",
        float(u_max) < -eval_err, float(-u_max), dt))
    checks.append(CheckResult(
        "branch_order_grid", "numeric-grid",
        f"v_-(s) > v(s) > v_+(s) on the grid (margins "
        f"{mpmath.nstr(lo_m, 6)}, {mpmath.nstr(hi_m, 6)})",
        float(lo_m) > eval_err and float(hi_m) > eval_err,
        float(min(lo_m, hi_m)), 0.0))
    checks.append(CheckResult(
        "vieta_consistency", "numeric-grid",
        f"branch sum/product agree with -Z62/Z63 and Z61/Z63 "
        f"(worst {mpmath.nstr(vieta, 6)})",
        float(vieta) < 1e-20, float(vieta), 0.0))

    # (7) endpoint expansions
    checks.extend(_expansion_checks(data, cfg))

    # (8) tangency scan along v = v(s)
    frag = tangency_scan(cfg, data=data)
    checks.extend(frag)

    notes = [
        _NONRIGOROUS_NOTE.format(prec=cfg.precision),
        _CONTRADICTION_NOTE,
    ]
    return CertificateReport(checks=checks, config=cfg, notes=notes)


def _expansion_checks(data: SymbolicData, cfg: GridConfig) -> List[CheckResult]:
    out = []
    prec = max(cfg.precision, 512)

    def run_left():
        # U(s) = -(1/5)(3 + 2 sqrt2) d^2 + O(d^3) at the left endpoint
        with mpmath.workprec(prec + 64):
            s2 = mpmath.sqrt(2)
            d = mpmath.mpf("1e-10")
            s = s2 - 1 + d
            u = _poly_ratio(data.z51, data.z52, s) + eval_v(s, prec)
            target = -(3 + 2 * s2) / 5
            got = u / d ** 2
            return abs(got - target) / abs(target)
    rel, dt = _timed(run_left)
    out.append(CheckResult(
        "u_left_expansion", "asymptotic",
        f"U ~ -(3+2 sqrt2)/5 * d^2 at the left endpoint (rel err {mpmath.nstr(rel, 4)})",
        float(rel) < 1e-6, float(rel), dt))

    def run_right():
        # U(s) = (1-2 sqrt2)/(18(1-s)) - log(1-s)/2 + O(1) near s = 1
        with mpmath.workprec(prec + 64):
            s2 = mpmath.sqrt(2)
            d = mpmath.mpf("1e-9")
            s = 1 - d
            u = _poly_ratio(data.z51, data.z52, s) + eval_v(s, prec)
            corrected = u + mpmath.log(d) / 2
            target = (1 - 2 * s2) / 18
            got = corrected * d
            return abs(got - target) / abs(target)
    rel, dt = _timed(run_right)
    out.append(CheckResult(
        "u_right_expansion", "asymptotic",
        f"U ~ (1-2 sqrt2)/(18(1-s)) - log(1-s)/2 near s=1 (rel err {mpmath.nstr(rel, 4)})",
        float(rel) < 1e-6, float(rel), dt))

    def run_v_quartic():
        # v = 1 + (3+2 sqrt2)/2 d^2 - (4+3 sqrt2)/4 d^3 + (103+72 sqrt2)/32 d^4 + O(d^5)
        with mpmath.workprec(2 * prec):
            s2 = mpmath.sqrt(2)
            d = mpmath.mpf("1e-10")
            v = eval_v(s2 - 1 + d, 2 * prec - 64)
            c2 = (3 + 2 * s2) / 2
            c3 = -(4 + 3 * s2) / 4
            c4 = (103 + 72 * s2) / 32
            e2 = abs((v - 1) / d ** 2 - c2) / c2
            e3 = abs((v - 1 - c2 * d ** 2) / d ** 3 - c3) / abs(c3)
            e4 = abs((v - 1 - c2 * d ** 2 - c3 * d ** 3) / d ** 4 - c4) / c4
            return max(e2, e3, e4)
    rel, dt = _timed(run_v_quartic)
    out.append(CheckResult(
        "v_quartic_expansion", "asymptotic",
        f"v(s) quartic expansion at the left endpoint (worst rel err {mpmath.nstr(rel, 4)})",
        float(rel) < 1e-6, float(rel), dt))

    def run_vminus_limit():
        # v_-(s) -> 13 at the left endpoint
        with mpmath.workprec(prec):
            s2 = mpmath.sqrt(2)
            s = s2 - 1 + mpmath.mpf("1e-12")
            z61 = data.z61.eval_mpf(s)
            z62 = data.z62.eval_mpf(s)
            z63 = data.z63.eval_mpf(s)
            sq = mpmath.sqrt(z62 * z62 - 4 * z61 * z63)
            vm = (-z62 - sq) / (2 * z63)
            return abs(vm - 13)
    err, dt = _timed(run_vminus_limit)
    out.append(CheckResult(
        "vminus_left_limit", "asymptotic",
        f"v_- -> 13 at the left endpoint (err {mpmath.nstr(err, 4)})",
        float(err) < 1e-6, float(err), dt))
    return out


def locate_s0(width: Fraction = Fraction(1, 1000),
              data: Optional[SymbolicData] = None) -> RootInterval:
    """Isolating interval (to the requested exact rational width) for the
    unique root of the structure-stripped tangency resultant."""
    data = data or symbolic_pipeline()
    inner = data.resultant_inner
    chain = SturmChain(inner)
    if chain.count(SQRT2_M1, _S_HI) != 1 or not chain.is_squarefree():
        raise RuntimeError("resultant stage must pass before locating s0")
    # a single simple root means a sign change of inner; bisect on signs with
    # exact rational offsets from the algebraic left endpoint
    lo, hi = SQRT2_M1, _S_HI
    # move lo to a point where inner does not vanish (it does not at either
    # endpoint: structural content was stripped)
    slo = inner(lo).sign()
    shi = inner(hi).sign()
    if slo == 0 or shi == 0 or slo == shi:
        raise RuntimeError("expected a sign change across the interval")
    w = Sqrt2Rational.coerce(width)
    while (hi - lo) > w:
        mid = (lo + hi) * Fraction(1, 2)
        sm = inner(mid).sign()
        if sm == 0:
            return RootInterval(mid, mid, True)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi, True)


def tangency_scan(cfg: Optional[GridConfig] = None,
                  data: Optional[SymbolicData] = None) -> List[CheckResult]:
    """Evaluate the tangency function along v = v(s): its sign pattern must
    show at most one change, co-located with the resultant's unique root."""
    cfg = cfg or GridConfig()
    data = data or symbolic_pipeline()

    def run():
        pts = s_grid(GridConfig(points=max(1000, cfg.points // 10),
                                precision=cfg.precision,
                                standoff=cfg.standoff))
        with mpmath.workprec(cfg.precision + 16):
            signs = []
            for s in pts:
                v = eval_v(s, cfg.precision)
                phi = mpmath.mpf(0)
                for k in (3, 2, 1, 0):
                    phi = phi * v + data.phis[k].eval_mpf(s)
                phi *= 4 * s * (1 - s ** 2)
                signs.append((s, 1 if phi > 0 else (-1 if phi < 0 else 0)))
            changes = []
            for (s1, g1), (s2, g2) in zip(signs, signs[1:]):
                if g1 != 0 and g2 != 0 and g1 != g2:
                    changes.append((s1, s2))
            return changes
    changes, dt = _timed(run)
    out = [CheckResult(
        "tangency_sign_changes", "numeric-grid",
        f"tangency function along v(s) shows {len(changes)} sign change(s)",
        len(changes) <= 1, None, dt)]
    if len(changes) == 1:
        def run_loc():
            iv = locate_s0(Fraction(1, 100), data=data)
            s1, s2 = changes[0]
            # co-location: the numeric bracket and the exact interval overlap
            return float(iv.lo) <= float(s2) and float(s1) <= float(iv.hi) + 1e-2
        ok, dt2 = _timed(run_loc)
        out.append(CheckResult(
            "tangency_colocated_with_s0", "numeric-grid",
            "the single sign change brackets the resultant's unique root",
            ok, None, dt2))
    return out


def _certify_override_basis(cfg: GridConfig, basis) -> CertificateReport:
    """Negative-control path: recompute W1..W6 for a replacement basis and
    flag structural failures (dependent bases collapse a Wronskian to 0)."""
    checks = []
    t0 = time.perf_counter()
    failed = False
    for i in range(1, 7):
        w = symdiff.wronskian(list(basis), i)
        if w.is_zero():
            checks.append(CheckResult(
                f"w{i}_nonzero", "exact",
                f"W{i} of the supplied basis is identically zero "
                "(dependent basis)", False, None, time.perf_counter() - t0))
            failed = True
            break
    if not failed:
        checks.append(CheckResult(
            "override_basis_nondegenerate", "exact",
            "no Wronskian of the supplied basis vanished identically; full "
            "certification requires the canonical basis", True, None,
            time.perf_counter() - t0))
    return CertificateReport(checks=checks, config=cfg, notes=[])
