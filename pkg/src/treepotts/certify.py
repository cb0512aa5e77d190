"""Inequality engine and the shrinking-sequence uniqueness certificate.

The four one-variable inequalities behind the existence of the shrinking
regions are reduced to the critical activity and then to positivity of
explicit integer polynomials on ``b > 1``.  The certificate builder then
constructs ``T_{a_0,b_0} -> T_{a_1,b_1} -> ...`` with every step a certified
image containment, until ``b_N - 1`` drops below a threshold.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import _table_data
from .bruteforce import MAX_EXHAUSTIVE_LEAVES, all_ratios_in_region
from .interval import (
    MAX_PRECISION,
    Interval,
    default_precision,
    interval_min,
    interval_pow,
    precision_ladder,
)
from .maps import PottsParams, base_case_ratios, parse_rational
from .poly import (
    DERIVATIVE_CASCADE,
    SHIFT_NONNEG,
    ExponentPoly,
    RationalPoly,
    certify_positive_on_open_ray,
)
from .regions import Membership, RegionParams, containment_check, region_membership, region_vertices

B = RationalPoly.x()


class UnsupportedParameters(ValueError):
    """Raised for (k, d, w) outside the range the inequality proofs cover."""


def critical_activity(k: int, d: int) -> Fraction:
    """``max(0, 1 - k/(d+1))``."""
    return max(Fraction(0), 1 - Fraction(k, d + 1))


# -- the four one-variable functions -------------------------------------------

@dataclass(frozen=True)
class IneqFunctions:
    """``l, g, h, u`` at fixed ``(k, d, w)``; exact for rational ``b``, intervals otherwise."""

    k: int
    d: int
    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", parse_rational(self.w))
        if not 0 <= self.w < 1:
            raise ValueError(f"w must lie in [0, 1), got {self.w}")

    def l(self, b):
        bd = b ** self.d
        return (bd + self.k - 2 + self.w) / (self.w * bd + self.k - 1)

    def g(self, b):
        bd = b ** self.d
        return (2 * bd + 1 + self.w) / ((1 + self.w) * bd + 2)

    def h(self, b):
        if not isinstance(b, Interval) and b == 1:
            return (self.k - 1 + self.w) / (self.d * (1 - self.w))
        if isinstance(b, Interval) and not b.certainly_gt(1):
            raise ValueError("h needs b > 1 or the exact point 1")
        bd = b ** self.d
        return bd * (b - 1) * (self.k - 1 + self.w) / ((bd - 1) * (b - self.w))

    def u(self, b, prec: int | None = None) -> Interval:
        return interval_pow(b, self.h(b), prec)


# -- the polynomials of the reduction ------------------------------------------

@dataclass(frozen=True)
class ReductionPolys:
    """Exact polynomials in ``b`` at ``w = w_c`` for one ``(k, d)``.

    ``l = p/q`` and ``h = s/t``; ``r = q p' - p q'`` and ``v = t s' - s t'``;
    ``P`` is the cleared numerator of the sufficient condition for ``u > l``
    and ``P0 = P / (k d b^d)``; ``Q > 0`` is ``b^2 > l``; ``m > 0`` is
    ``h' > 0``; ``g_gap > 0`` is ``g < b`` at ``w = 1 - 4/(d+1)``.
    """

    k: int
    d: int
    p: RationalPoly
    q: RationalPoly
    s: RationalPoly
    t: RationalPoly
    r: RationalPoly
    v: RationalPoly
    P: RationalPoly
    P0: RationalPoly
    Q: RationalPoly
    m: RationalPoly
    g_gap: RationalPoly

    def named(self) -> dict[str, RationalPoly]:
        return {name: getattr(self, name)
                for name in ("p", "q", "s", "t", "r", "v", "P", "P0", "Q", "m", "g_gap")}


def _condition_numerator(p, q, s, t, r, v, b, one):
    return (b + one) * s * p * q * t + 2 * b * (b - one) * v * p * q - b * (b + one) * r * t * t


def build_reduction_polys(k: int, d: int, at_wc: bool = True) -> ReductionPolys:
    """All reduction polynomials for integer ``d``; checks the two closed-form identities."""
    if not at_wc:
        raise ValueError("the reduction polynomials are defined at the critical activity only")
    if k not in (3, 4) or d < 2:
        raise UnsupportedParameters(f"polynomials are built for k in (3, 4) and d >= 2, got k={k}, d={d}")
    bd = B ** d
    p = (d + 1) * bd + (d * (k - 1) - 1)
    q = (d - k + 1) * bd + (d + 1) * (k - 1)
    s = d * k * bd * (B - 1)
    t = (bd - 1) * ((d + 1) * (B - 1) + k)
    r = q * p.derivative() - p * q.derivative()
    v = t * s.derivative() - s * t.derivative()
    m = (k * B ** (d + 1) - d * (d + 1) * B ** 2 + (2 * d * d - d * k + 2 * d - k) * B
         + (-d * d + d * k - d))
    if r != RationalPoly.monomial(d - 1, k * k * d * d):
        raise ArithmeticError(f"r(b) is not k^2 d^2 b^(d-1) for k={k}, d={d}")
    if v != RationalPoly.monomial(d - 1, k * d) * m:
        raise ArithmeticError(f"v(b) is not k d b^(d-1) m(b) for k={k}, d={d}")
    P = _condition_numerator(p, q, s, t, r, v, B, 1)
    P0 = P.divide_by_power_of_b(d) / (k * d)
    Q = ((d - k + 1) * B ** (d + 2) - (d + 1) * bd + (d + 1) * (k - 1) * B ** 2
         + (1 - d * (k - 1)))
    g_gap = (d - 1) * B ** (d + 1) - (d + 1) * bd + (d + 1) * B - (d - 1)
    return ReductionPolys(k, d, p, q, s, t, r, v, P, P0, Q, m, g_gap)


def symbolic_p0(k: int) -> ExponentPoly:
    """``P0`` with ``d`` kept symbolic (valid where no two exponents ``i d + j`` collide)."""
    D = RationalPoly.x()
    bd = ExponentPoly.monomial(1, 0)
    b = ExponentPoly.monomial(0, 1)
    p = (D + 1) * bd + (D * (k - 1) - 1)
    q = (D - (k - 1)) * bd + (D + 1) * (k - 1)
    s = D * k * bd * (b - 1)
    t = (bd - 1) * ((D + 1) * (b - 1) + k)
    r = q * p.derivative() - p * q.derivative()
    v = t * s.derivative() - s * t.derivative()
    P = _condition_numerator(p, q, s, t, r, v, b, 1)
    P0 = P.shift_exponent(-1, 0).divide_coefficients(RationalPoly.constant(k) * D)
    if any(i < 0 for i, _ in P0.terms):
        raise ArithmeticError("P is not divisible by b^d")
    return P0


# -- proof records --------------------------------------------------------------

@dataclass(frozen=True)
class PolyEvidence:
    name: str
    digest: str
    degree: int
    status: str
    method: str | None

    def to_dict(self) -> dict:
        return {"name": self.name, "sha256": self.digest, "degree": self.degree,
                "status": self.status, "method": self.method}


@dataclass(frozen=True)
class ProofRecord:
    """Outcome of one inequality proof attempt."""

    which: int
    k: int
    d: int
    w: Fraction
    reduced_to: Fraction
    status: str
    method: str | None
    evidence: tuple[PolyEvidence, ...]
    side_conditions: tuple[str, ...] = ()
    offending: RationalPoly | None = field(default=None, compare=False)

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    def to_dict(self) -> dict:
        return {
            "id": self.which,
            "method": self.method,
            "status": self.status,
            "reduced_to": _frac_str(self.reduced_to),
            "polynomials": [e.to_dict() for e in self.evidence],
            "side_conditions": list(self.side_conditions),
        }


INEQUALITY_NAMES = {
    1: "u > l",
    2: "u > b",
    3: "b^2 > l",
    4: "g < b",
}


def check_supported(which: int, k: int, d: int) -> None:
    if which not in INEQUALITY_NAMES:
        raise UnsupportedParameters(f"inequality index must be 1..4, got {which}")
    if k == 3 and d >= 2:
        return
    if k == 4 and (d >= 4 or (which == 4 and d >= 3)):
        return
    raise UnsupportedParameters(
        f"inequality {which} is covered for k=3, d>=2 and k=4, d>=4"
        f"{' (d>=3 for inequality 4)' if k == 4 else ''}; got k={k}, d={d}")


def verify_inequality(which: int, k: int, d: int, w) -> ProofRecord:
    """Prove inequality ``which`` for every ``b > 1`` at activity ``w``.

    ``l`` decreases and ``u`` increases in ``w`` while ``g`` decreases, so it
    is enough to work at ``w_c`` (inequalities 1-3) or at ``1 - 4/(d+1)``
    (inequality 4), both of which lie at or below any admissible ``w``.
    """
    check_supported(which, k, d)
    w = parse_rational(w)
    wc = critical_activity(k, d)
    if not (wc <= w < 1):
        raise UnsupportedParameters(f"need w_c = {wc} <= w < 1, got w = {w}")
    polys = build_reduction_polys(k, d)
    fns = IneqFunctions(k, d, wc)
    side: list[str] = []
    if which == 1:
        if fns.l(Fraction(1)) != 1 or fns.h(Fraction(1)) != 1:
            raise ArithmeticError("u and l must agree at b = 1")
        if polys.r(1) != polys.p(1) * polys.q(1):
            raise ArithmeticError("log u - log l must have zero slope at b = 1")
        side += ["l(1) = u(1) = 1", "(log u - log l)'(1) = 0", "h' > 0 via m"]
        targets = [("P0", polys.P0), ("m", polys.m)]
        reduced = wc
    elif which == 2:
        if fns.h(Fraction(1)) != 1:
            raise ArithmeticError("h(1) must equal 1 at the critical activity")
        side.append("h(1) = 1")
        targets = [("m", polys.m)]
        reduced = wc
    elif which == 3:
        targets = [("Q", polys.Q)]
        reduced = wc
    else:
        reduced = 1 - Fraction(4, d + 1)
        targets = [("g_gap", polys.g_gap)]
    evidence = []
    offending = None
    for name, poly in targets:
        verdict = certify_positive_on_open_ray(poly)
        evidence.append(PolyEvidence(name, poly.digest(), poly.degree, verdict.status, verdict.method))
        if not verdict.proven and offending is None:
            offending = poly
    proven = offending is None
    return ProofRecord(which, k, d, w, reduced, "proven" if proven else "failed",
                       evidence[0].method if proven else None, tuple(evidence), tuple(side), offending)


def verify_all_inequalities(k: int, d: int, w) -> dict[str, ProofRecord]:
    which = (1, 2, 3, 4)
    return {f"ineq{i}": verify_inequality(i, k, d, w) for i in which}


# -- coefficient tables ------------------------------------------------------

@dataclass(frozen=True)
class TableMismatch:
    table: str
    row: str
    column: str
    expected: object
    got: object

    def __str__(self) -> str:
        return f"{self.table} row {self.row} column {self.column}: expected {self.expected}, got {self.got}"


@dataclass
class TableReport:
    k: int
    d_symbolic: bool
    d_values: tuple[int, ...]
    checked: int = 0
    mismatches: list[TableMismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def _compare(self, table, row, column, expected, got):
        self.checked += 1
        if expected != got:
            self.mismatches.append(TableMismatch(table, row, column, expected, got))

    def summary(self) -> str:
        mode = "symbolic" if self.d_symbolic else "d=" + ",".join(map(str, self.d_values))
        return f"k={self.k} {mode}: {self.checked} entries checked, {len(self.mismatches)} mismatches"


def _reference_tables(k: int, tamper: bool):
    coeffs = dict(_table_data.P0_COEFFS[k])
    values = dict(_table_data.CASCADE_VALUES[k])
    if tamper:
        coeffs[(3, 3)] = coeffs[(3, 3)] + 1
    return coeffs, values, _table_data.COMMON_FACTOR[k]


def reconstruct_p0(k: int, d: int) -> RationalPoly:
    """``P0`` assembled from the reference coefficient table at integer ``d``."""
    out = RationalPoly()
    for (i, j), c in _table_data.P0_COEFFS[k].items():
        out = out + RationalPoly.monomial(i * d + j, c(d))
    return out


def _cascade_step(p: RationalPoly, d: int) -> RationalPoly:
    return p.derivative(4).divide_by_power_of_b(d - 4)


def regenerate_tables(k: int, d_symbolic: bool = False, d_values: Sequence[int] = range(4, 13),
                      tamper: bool = False) -> TableReport:
    """Rebuild the ``P0`` coefficient table and the cascade values and compare exactly."""
    if k not in (3, 4):
        raise UnsupportedParameters(f"tables exist for k = 3 or 4, got {k}")
    d_values = tuple(d_values)
    if not d_symbolic and any(d < 4 for d in d_values):
        raise ValueError("table layout needs d >= 4")
    coeffs, values, factor = _reference_tables(k, tamper)
    report = TableReport(k, d_symbolic, () if d_symbolic else d_values)
    if d_symbolic:
        _compare_symbolic(k, coeffs, values, factor, report)
        return report
    keys = set(coeffs)
    for d in d_values:
        p0 = build_reduction_polys(k, d).P0
        col = f"d={d}"
        for (i, j), c in sorted(coeffs.items()):
            report._compare("P0 coefficients", _table_data.row_label(i, j), col, c(d), p0.coeff(i * d + j))
        for e, c in enumerate(p0.coeffs):
            if c and (e // d, e % d) not in keys:
                report._compare("P0 coefficients", f"b^{e}", col, Fraction(0), c)
        x = d - 4
        pn = p0
        for n in range(4):
            for i in range(4):
                expected = values[(n, i)](x) * factor(x)
                report._compare(f"cascade values k={k}", _table_data.cascade_label(n, i),
                                f"x={x}", expected, pn.derivative(i)(1))
            if n < 3:
                pn = _cascade_step(pn, d)
    return report


def _compare_symbolic(k, coeffs, values, factor, report: TableReport):
    p0 = symbolic_p0(k)
    for key in sorted(set(p0.terms) | set(coeffs)):
        report._compare("P0 coefficients", _table_data.row_label(*key), "symbolic",
                        coeffs.get(key, RationalPoly()), p0[key])
    pn = p0
    for n in range(4):
        for i in range(4):
            # polynomial in d, re-expressed in x = d - 4
            got = pn.derivative(i).at_one().compose_shift(4)
            report._compare(f"cascade values k={k}", _table_data.cascade_label(n, i), "symbolic",
                            values[(n, i)] * factor, got)
        if n < 3:
            pn = pn.derivative(4).shift_exponent(-1, 4)
            if any(i < 0 for i, _ in pn.terms):
                raise ArithmeticError("cascade step left a term below b^(d-4)")


# -- L, U, M ---------------------------------------------------------------------

@dataclass(frozen=True)
class LUM:
    """Enclosures of ``L(b) = max(b, l(b))``, ``U(b) = min(b^2, u(b))`` and their midpoint."""

    b: Fraction
    L: Interval
    U: Interval
    M: Interval
    L_exact: Fraction

    def __iter__(self):
        return iter((self.L, self.U, self.M))


def L_U_M(b, k: int, d: int, w, prec: int | None = None, max_prec: int = MAX_PRECISION) -> LUM:
    """Certified ``L(b) < U(b)`` with enclosures; raises ``ArithmeticError`` if they cannot be separated."""
    b = parse_rational(b)
    if b <= 1:
        raise ValueError(f"L, U, M need b > 1, got {b}")
    fns = IneqFunctions(k, d, w)
    lower = max(b, fns.l(b))
    for bits in precision_ladder(prec, max_prec):
        L = Interval.from_value(lower, bits)
        U = interval_min(Interval.from_value(b * b, bits), fns.u(b, bits))
        if U.certainly_gt(L):
            return LUM(b, L, U, (L + U) / 2, lower)
    raise ArithmeticError(f"cannot separate L(b) < U(b) at b = {b}")


def _dyadic_round(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(round(x * scale), scale)


def _dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.ceil(x * scale), scale)


def choose_a(b, k: int, d: int, w, prec: int | None = None) -> Fraction:
    """A short dyadic rational ``a`` with ``L(b) < a < U(b)``, as close to ``M(b)`` as it needs."""
    lum = L_U_M(b, k, d, w, prec)
    gap = lum.U.lo_fraction() - lum.L_exact
    bits = max(8, -math.floor(math.log2(gap)) + 16)
    while bits <= 4 * (prec or default_precision()):
        a = _dyadic_round(lum.M.mid_fraction(), bits)
        if lum.L_exact < a and lum.U.certainly_gt(a):
            return a
        bits += 16
    raise ArithmeticError(f"no dyadic point found between L and U at b = {b}")


# -- the shrinking sequence ---------------------------------------------------

REFINE_BITS = 4


class CertStatus(str, Enum):
    CERTIFIED = "certified"
    FAILED = "failed"


@dataclass(frozen=True)
class SequenceOptions:
    b_margin: Fraction = Fraction(1, 10)
    bisection_tol: Fraction = Fraction(1, 1000)
    max_iters: int = 2000
    threshold: Fraction = Fraction(1, 10**6)
    max_refinements: int = 6
    audit_depth: int = 2
    audit_sample: int = 2000
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "b_margin": _frac_str(self.b_margin),
            "bisection_tol": _frac_str(self.bisection_tol),
            "max_iters": self.max_iters,
            "threshold": _frac_str(self.threshold),
            "max_refinements": self.max_refinements,
            "audit_depth": self.audit_depth,
            "audit_sample": self.audit_sample,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SequenceStep:
    n: int
    b: Fraction
    a: Fraction
    containment: str
    precision: int
    probes: int

    def to_dict(self) -> dict:
        return {"n": self.n, "b": _frac_str(self.b), "a": _frac_str(self.a),
                "containment": self.containment, "precision_bits": self.precision,
                "probes": self.probes}


@dataclass(frozen=True)
class AuditEntry:
    depth: int
    ok: bool
    checked: int
    distinct: int
    sampled: bool

    def to_dict(self) -> dict:
        return {"depth": self.depth, "ok": self.ok, "checked": self.checked,
                "distinct": self.distinct, "sampled": self.sampled}


@dataclass
class Certificate:
    params: PottsParams
    inequality_verdicts: dict[str, ProofRecord]
    b0: Fraction | None
    sequence: list[SequenceStep]
    status: CertStatus
    failed_step: int | None
    reason: str
    distance_bound: Fraction | None
    precision_bits: int
    options: SequenceOptions
    audit: list[AuditEntry] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status is CertStatus.CERTIFIED

    @property
    def b_values(self) -> list[Fraction]:
        return [s.b for s in self.sequence]

    @property
    def convergence_radius(self) -> Fraction | None:
        return self.distance_bound

    def to_dict(self) -> dict:
        p = self.params
        return {
            "params": {"k": p.k, "d": p.d, "w": _frac_str(p.w)},
            "inequalities": [r.to_dict() for r in self.inequality_verdicts.values()],
            "b0": _frac_str(self.b0) if self.b0 is not None else None,
            "b_sequence": [s.to_dict() for s in self.sequence],
            "status": self.status.value,
            "failed_step": self.failed_step,
            "reason": self.reason,
            "distance_bound": _frac_str(self.distance_bound) if self.distance_bound is not None else None,
            "audit": [a.to_dict() for a in self.audit],
            "precision_bits": self.precision_bits,
            "options": self.options.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def check_certifiable(k: int, d: int, w, allow_subcritical: bool = False) -> Fraction:
    w = parse_rational(w)
    if k not in (3, 4):
        raise UnsupportedParameters(f"certification covers k = 3 or 4, got k={k}")
    if (k == 3 and d < 2) or (k == 4 and d < 4):
        raise UnsupportedParameters(f"certification covers k=3 with d>=2 and k=4 with d>=4, got k={k}, d={d}")
    if not (0 < w < 1):
        raise UnsupportedParameters(f"w must satisfy 0 < w < 1, got {w}")
    wc = critical_activity(k, d)
    if w < wc and not allow_subcritical:
        raise UnsupportedParameters(f"w = {w} is below the uniqueness threshold {wc}")
    return w


def _region_for(b: Fraction, params: PottsParams, prec: int) -> RegionParams:
    return RegionParams(choose_a(b, params.k, params.d, params.w, prec), b, params.k)


def _initial_region(params: PottsParams, options: SequenceOptions, prec: int):
    margin = 1 + options.b_margin
    b = _dyadic_ceil(margin / params.w, 10)
    bases = [base_case_ratios(c, params) for c in range(1, params.k + 1)]
    for _ in range(64):
        region = _region_for(b, params, prec)
        if all(region_membership(x, region, prec) is Membership.INSIDE for x in bases):
            return region
        b = _dyadic_ceil(b * margin, 10)
    raise ArithmeticError("no starting region contains the base-case ratios")


def _distance_bound(region: RegionParams, prec: int) -> Fraction:
    """Upper bound on ``max_i |x_i - 1|`` over ``T_{a,b}`` from its vertex set."""
    worst = Fraction(0)
    for pt in region_vertices(region).points(prec):
        for v in pt:
            if isinstance(v, Interval):
                e = v.exp()
                worst = max(worst, e.hi_fraction() - 1, 1 - e.lo_fraction())
    return worst


def _probe(source: RegionParams, b: Fraction, params: PottsParams, prec: int):
    try:
        target = _region_for(b, params, prec)
    except ArithmeticError:
        return None, None
    res = containment_check(source, target, params, prec)
    return target, res


def build_shrinking_sequence(k: int, d: int, w, options: SequenceOptions | None = None,
                             prec: int | None = None, progress=None) -> Certificate:
    """Construct the certified decreasing sequence ``b_0 > b_1 > ...``.

    Each ``b_n`` is the smallest grid point (grid spacing below
    ``bisection_tol * (b_{n-1} - 1)``) whose region certifiably contains
    the image of the previous one.  Inequality verdicts are left empty; see
    :func:`certify_uniqueness` for the full pipeline.  Activities below the
    threshold are accepted as an experiment; the run is then expected to fail.
    """
    w = check_certifiable(k, d, w, allow_subcritical=True)
    options = options or SequenceOptions()
    prec = prec or default_precision()
    params = PottsParams(k, d, w)

    def finish(status, failed, reason, b0, seq, region):
        bound = _distance_bound(region, prec) if region is not None else None
        return Certificate(params, {}, b0, seq, status, failed, reason, bound, prec, options)

    try:
        region = _initial_region(params, options, prec)
    except ArithmeticError as exc:
        return finish(CertStatus.FAILED, 0, str(exc), None, [], None)
    b0 = region.b
    seq = [SequenceStep(0, region.b, region.a, "base-inside", prec, 0)]
    grid = 10
    for n in range(1, options.max_iters + 1):
        if region.b - 1 < options.threshold:
            return finish(CertStatus.CERTIFIED, None, "threshold reached", b0, seq, region)
        gap = region.b - 1
        grid = max(grid, math.ceil(-math.log2(gap * options.bisection_tol)) + 1)
        scale = 1 << grid
        hi = int(gap * scale)
        lo = 0
        probes = 1
        target, res = _probe(region, region.b, params, prec)
        if res is None or not res.certified:
            why = res.reason if res is not None else "L and U not separated"
            return finish(CertStatus.FAILED, n, f"previous region does not map into itself: {why}",
                          b0, seq, region)
        best, best_res = target, res
        for _ in range(options.max_refinements + 1):
            while hi - lo > 1:
                mid = (lo + hi) // 2
                probes += 1
                target, res = _probe(region, 1 + Fraction(mid, scale), params, prec)
                if res is not None and res.certified:
                    hi, best, best_res = mid, target, res
                else:
                    lo = mid
            if best.b < region.b:
                break
            # no decrease at this resolution: refine the grid between the
            # last failed probe and the previous b
            grid += REFINE_BITS
            scale <<= REFINE_BITS
            lo, hi = lo << REFINE_BITS, hi << REFINE_BITS
        if best.b >= region.b:
            return finish(CertStatus.FAILED, n, "no strictly smaller region is certified", b0, seq, region)
        seq.append(SequenceStep(n, best.b, best.a, best_res.verdict, best_res.precision, probes))
        region = best
        if progress is not None:
            progress(seq[-1])
    if region.b - 1 < options.threshold:
        return finish(CertStatus.CERTIFIED, None, "threshold reached", b0, seq, region)
    return finish(CertStatus.FAILED, options.max_iters,
                  f"b_N - 1 = {float(region.b - 1):.3e} above threshold after {options.max_iters} steps",
                  b0, seq, region)


def _audit(cert: Certificate, options: SequenceOptions) -> list[AuditEntry]:
    params = cert.params
    out = []
    for step in cert.sequence[: options.audit_depth + 1]:
        n = step.n
        exhaustive = params.d ** n <= MAX_EXHAUSTIVE_LEAVES
        sample = None if exhaustive else options.audit_sample
        region = RegionParams(step.a, step.b, params.k)
        check = all_ratios_in_region(n, params, region, sample=sample, seed=options.seed)
        out.append(AuditEntry(n, check.ok, check.checked, check.distinct, not exhaustive))
    return out


def certify_uniqueness(k: int, d: int, w, options: SequenceOptions | None = None,
                       prec: int | None = None, progress=None) -> Certificate:
    """Inequality proofs, the shrinking sequence and a brute-force audit of its first regions."""
    w = check_certifiable(k, d, w)
    options = options or SequenceOptions()
    verdicts = verify_all_inequalities(k, d, w)
    cert = build_shrinking_sequence(k, d, w, options, prec, progress)
    cert.inequality_verdicts = verdicts
    cert.audit = _audit(cert, options)
    failed = [key for key, rec in verdicts.items() if not rec.proven]
    if cert.certified and failed:
        cert.status = CertStatus.FAILED
        cert.failed_step = 0
        cert.reason = f"inequalities not proven: {', '.join(failed)}"
    bad = [a.depth for a in cert.audit if not a.ok]
    if cert.certified and bad:
        cert.status = CertStatus.FAILED
        cert.failed_step = bad[0]
        cert.reason = f"brute-force ratios escape the region at depth {bad[0]}"
    return cert


__all__ = [
    "AuditEntry",
    "CertStatus",
    "Certificate",
    "DERIVATIVE_CASCADE",
    "IneqFunctions",
    "INEQUALITY_NAMES",
    "LUM",
    "L_U_M",
    "ProofRecord",
    "SHIFT_NONNEG",
    "ReductionPolys",
    "SequenceOptions",
    "SequenceStep",
    "TableMismatch",
    "TableReport",
    "UnsupportedParameters",
    "build_reduction_polys",
    "build_shrinking_sequence",
    "certify_uniqueness",
    "check_certifiable",
    "choose_a",
    "critical_activity",
    "reconstruct_p0",
    "regenerate_tables",
    "symbolic_p0",
    "verify_all_inequalities",
    "verify_inequality",
]
