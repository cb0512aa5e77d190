"""The symmetric log-polytope family ``T_{a,b}`` for three and four colours.

In log coordinates ``T_{a,b}`` is the union, over all colour permutations, of
the images of one sector cut by a single half-space.  When ``(a, b)`` lies in
the valid range the same set is the intersection of the permuted half-spaces,
which is what membership tests use.  Both ``log a`` and ``log b`` are
transcendental, so membership is three-valued and evaluated with intervals.

Exact bookkeeping: every vertex coordinate and every constraint normal is an
integer combination ``alpha * log(a) + beta * log(b)``, stored as the pair
``(alpha, beta)``.  That keeps symmetry checks exact.
"""

from __future__ import annotations

import functools
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .interval import Interval, default_precision, precision_ladder, MAX_PRECISION
from .maps import Permutation, PottsParams, all_permutations, map_G, parse_rational

LinForm = tuple[int, int]


class Membership(str, Enum):
    INSIDE = "inside"
    UNDECIDED = "boundary-or-undecided"
    OUTSIDE = "outside"


def _exact_log_ratio(a: Fraction, b: Fraction, limit: int = 6) -> Fraction | None:
    """``log a / log b`` when it is a small rational ``p/q`` (``a**q == b**p``), else None."""
    for q in range(1, limit + 1):
        aq = a ** q
        for p in range(1, 2 * limit + 1):
            if aq == b ** p:
                return Fraction(p, q)
    return None


@dataclass(frozen=True)
class RegionParams:
    """Parameters ``a, b > 1`` of ``T_{a,b}`` and the number of colours."""

    a: Fraction
    b: Fraction
    k: int = 3

    def __post_init__(self):
        object.__setattr__(self, "a", parse_rational(self.a))
        object.__setattr__(self, "b", parse_rational(self.b))
        if self.k not in (3, 4):
            raise ValueError(f"regions exist for k = 3 or 4 only, got {self.k}")
        if not (self.a > 1 and self.b > 1):
            raise ValueError(f"need a, b > 1, got a={self.a}, b={self.b}")

    @property
    def valid(self) -> bool:
        """Whether the half-space intersection equals the union of pieces."""
        a, b = self.a, self.b
        if self.k == 3:
            return b <= a * a and a <= b * b
        return b <= a <= b * b

    def logs(self, prec: int | None = None) -> tuple[Interval, Interval]:
        return _logs(self.a, self.b, prec or default_precision())

    def log_ratio(self) -> Fraction | None:
        return _exact_log_ratio(self.a, self.b)

    def power(self, d: int) -> "RegionParams":
        """Parameters of the entrywise ``d``-th power of the region."""
        return RegionParams(self.a ** d, self.b ** d, self.k)


@functools.lru_cache(maxsize=4096)
def _logs(a: Fraction, b: Fraction, prec: int) -> tuple[Interval, Interval]:
    return Interval.from_value(a, prec).log(), Interval.from_value(b, prec).log()


def _eval_form(form: LinForm, ah: Interval, bh: Interval):
    alpha, beta = form
    if alpha == 0 and beta == 0:
        return Fraction(0)
    return alpha * ah + beta * bh


# -- the S_k action in log coordinates ---------------------------------------

@functools.lru_cache(maxsize=None)
def log_perm_matrix(sigma: Permutation) -> tuple[tuple[int, ...], ...]:
    """Integer matrix of the permutation action in log coordinates."""
    k = sigma.k
    inv = sigma.inverse()
    rows = []
    for j in range(1, k):
        rows.append(tuple(int(inv(j) == m) - int(inv(k) == m) for m in range(1, k)))
    return tuple(rows)


def _apply_int_matrix(mat, vec):
    out = []
    for row in mat:
        acc = (0, 0)
        for c, v in zip(row, vec):
            if c:
                acc = (acc[0] + c * v[0], acc[1] + c * v[1])
        out.append(acc)
    return tuple(out)


def _base_normal(k: int) -> tuple[LinForm, ...]:
    # -log(b) * v_1 + log(a) * v_{k-1} <= log(a) log(b)
    if k == 3:
        return ((0, -1), (1, 0))
    return ((0, -1), (0, 0), (1, 0))


@functools.lru_cache(maxsize=None)
def constraint_normals(k: int) -> tuple[tuple[LinForm, ...], ...]:
    """Distinct normals ``n`` with constraints ``n . v <= log(a) log(b)``, one per permuted half-space."""
    base = _base_normal(k)
    seen = []
    for sigma in all_permutations(k):
        mat = log_perm_matrix(sigma)
        normal = []
        for m in range(k - 1):
            acc = (0, 0)
            for j in range(k - 1):
                c = mat[j][m]
                if c:
                    acc = (acc[0] + c * base[j][0], acc[1] + c * base[j][1])
            normal.append(acc)
        normal = tuple(normal)
        if normal not in seen:
            seen.append(normal)
    return tuple(seen)


@dataclass(frozen=True)
class HalfSpace:
    """``normal . v <= offset`` in log coordinates."""

    normal: tuple
    offset: object
    sense: str = "<="


def half_spaces(region: RegionParams, prec: int | None = None) -> list[HalfSpace]:
    ah, bh = region.logs(prec)
    return [HalfSpace(tuple(_eval_form(f, ah, bh) for f in nrm), ah * bh)
            for nrm in constraint_normals(region.k)]


# -- membership ---------------------------------------------------------------

def _as_log_point(x, prec):
    return tuple(Interval.from_value(xi, prec).log() for xi in x)


@functools.lru_cache(maxsize=4096)
def _normals_at(a: Fraction, b: Fraction, k: int, prec: int):
    ah, bh = _logs(a, b, prec)
    rows = []
    for nrm in constraint_normals(k):
        rows.append(tuple((i, _eval_form(f, ah, bh)) for i, f in enumerate(nrm) if f != (0, 0)))
    return ah * bh, tuple(rows)


def membership_log(v: Sequence[Interval], region: RegionParams, prec: int | None = None) -> Membership:
    """Intersection-form membership of a log-coordinate point at one precision."""
    prec = prec or default_precision()
    rhs, rows = _normals_at(region.a, region.b, region.k, prec)
    verdict = Membership.INSIDE
    for row in rows:
        slack = rhs
        for i, c in row:
            slack = slack - c * v[i]
        if slack.certainly_negative():
            return Membership.OUTSIDE
        if verdict is Membership.INSIDE and not slack.certainly_positive():
            verdict = Membership.UNDECIDED
    return verdict


def _escalate(fn, prec, max_prec):
    verdict = Membership.UNDECIDED
    for bits in precision_ladder(prec, max_prec):
        verdict = fn(bits)
        if verdict is not Membership.UNDECIDED:
            return verdict
    return verdict


def region_membership(x: Sequence, region: RegionParams, prec: int | None = None,
                      max_prec: int = MAX_PRECISION) -> Membership:
    """Three-valued membership of a ratio point in ``T_{a,b}``.

    *Inside* means every permuted half-space holds strictly, *outside* means one
    is certainly violated.  Undecided points are retried with doubled precision
    up to ``max_prec`` bits.  Outside the valid parameter range the union form
    is used instead.
    """
    if len(x) != region.k - 1:
        raise ValueError(f"point needs {region.k - 1} entries")
    if not region.valid:
        return union_membership(x, region, prec, max_prec)
    return _escalate(lambda bits: membership_log(_as_log_point(x, bits), region, bits),
                     prec or default_precision(), max_prec)


def _sector_conditions(u):
    """Sign tests ``u_1 <= 0 <= u_2 (<= u_3)`` as a list of ``lhs <= rhs`` pairs."""
    conds = [(u[0], 0), (0, u[1])]
    if len(u) == 3:
        conds.append((u[1], u[2]))
    return conds


def _le_status(lhs, rhs):
    """+1 if certainly ``lhs <= rhs``, -1 if certainly ``lhs > rhs``, 0 otherwise."""
    diff = rhs - lhs
    if isinstance(diff, Interval):
        if diff.certainly_nonnegative():
            return 1
        if diff.certainly_negative():
            return -1
        return 0
    return 1 if diff >= 0 else -1


@functools.lru_cache(maxsize=None)
def _signed_rows(k: int):
    """Per permutation, each log-action row as ``(plus indices, minus indices)``."""
    out = []
    for sigma in all_permutations(k):
        rows = []
        for row in log_perm_matrix(sigma):
            rows.append((tuple(i for i, c in enumerate(row) if c == 1),
                         tuple(i for i, c in enumerate(row) if c == -1)))
        out.append(tuple(rows))
    return tuple(out)


def _signed_sum(plus, minus, v):
    acc = None
    for i in plus:
        acc = v[i] if acc is None else acc + v[i]
    for i in minus:
        acc = -v[i] if acc is None else acc - v[i]
    return acc


def union_membership_log(v: Sequence[Interval], region: RegionParams, prec: int | None = None) -> Membership:
    """Union-of-pieces membership of a log point at one precision.

    Inside: some permuted copy of the base piece certainly contains the point
    with the half-space inequality strict.  Outside: every permuted piece
    certainly excludes it.
    """
    prec = prec or default_precision()
    ah, bh = region.logs(prec)
    rhs = ah * bh
    zero = Interval.from_value(0, prec)
    all_out = True
    for rows in _signed_rows(region.k):
        u = [_signed_sum(plus, minus, v) or zero for plus, minus in rows]
        diffs = [-u[0], u[1]] + ([u[2] - u[1]] if len(u) == 3 else [])
        in_sector = all(dv.certainly_nonnegative() for dv in diffs)
        out_sector = any(dv.certainly_negative() for dv in diffs)
        slack = rhs + bh * u[0] - ah * u[-1]
        if in_sector and slack.certainly_positive():
            return Membership.INSIDE
        if all_out and not (out_sector or slack.certainly_negative()):
            all_out = False
    return Membership.OUTSIDE if all_out else Membership.UNDECIDED


def union_membership(x: Sequence, region: RegionParams, prec: int | None = None,
                     max_prec: int = MAX_PRECISION) -> Membership:
    return _escalate(lambda bits: union_membership_log(_as_log_point(x, bits), region, bits),
                     prec or default_precision(), max_prec)


# -- vertex sets --------------------------------------------------------------

_A, _B, _Z = (1, 0), (0, 1), (0, 0)


def _neg(f: LinForm) -> LinForm:
    return (-f[0], -f[1])


_VERTICES = {
    3: (
        (_Z, _Z), (_Z, _neg(_A)), (_neg(_A), _Z), (_A, _A),
        (_Z, _B), (_B, _Z), (_neg(_B), _neg(_B)),
    ),
    4: (
        (_Z, _Z, _Z), (_neg(_A), _Z, _Z), (_Z, _neg(_A), _Z), (_Z, _Z, _neg(_A)), (_A, _A, _A),
        (_B, _Z, _Z), (_Z, _B, _Z), (_Z, _Z, _B),
        (_Z, _B, _B), (_B, _Z, _B), (_B, _B, _Z),
        (_Z, _neg(_B), _neg(_B)), (_neg(_B), _Z, _neg(_B)), (_neg(_B), _neg(_B), _Z),
        (_neg(_B), _neg(_B), _neg(_B)),
    ),
}


@dataclass(frozen=True)
class VertexSet:
    """The vertex set of ``T_{a,b}`` in log coordinates, kept symbolic."""

    region: RegionParams
    forms: tuple[tuple[LinForm, ...], ...]

    def __len__(self):
        return len(self.forms)

    def points(self, prec: int | None = None) -> list[tuple]:
        ah, bh = self.region.logs(prec)
        return [tuple(_eval_form(f, ah, bh) for f in pt) for pt in self.forms]

    def is_closed(self) -> bool:
        """Exact check that every permutation maps the set onto itself."""
        base = set(self.forms)
        for sigma in all_permutations(self.region.k):
            mat = log_perm_matrix(sigma)
            if {_apply_int_matrix(mat, pt) for pt in self.forms} != base:
                return False
        return True

    @staticmethod
    def label(pt) -> str:
        def one(f):
            alpha, beta = f
            parts = []
            if alpha:
                parts.append({1: "A", -1: "-A"}.get(alpha, f"{alpha}A"))
            if beta:
                s = {1: "B", -1: "-B"}.get(beta, f"{beta}B")
                parts.append(s if not parts or s.startswith("-") else "+" + s)
            return "".join(parts) or "0"
        return "(" + ", ".join(one(f) for f in pt) + ")"


def region_vertices(region: RegionParams) -> VertexSet:
    """The 7 (k=3) or 15 (k=4) extreme candidates, origin included."""
    if not region.valid:
        raise ValueError("vertex description requires parameters in the valid range")
    return VertexSet(region, _VERTICES[region.k])


def _quadratic_slack(normal, pt) -> tuple[int, int, int]:
    """Coefficients of ``A^2, AB, B^2`` in ``A*B - normal . pt`` (A = log a, B = log b)."""
    caa = cab = cbb = 0
    for (n_a, n_b), (p_a, p_b) in zip(normal, pt):
        caa -= n_a * p_a
        cab -= n_a * p_b + n_b * p_a
        cbb -= n_b * p_b
    return caa, cab + 1, cbb


def _quadratic_sign(coeffs, region: RegionParams, prec: int | None) -> int | None:
    caa, cab, cbb = coeffs
    if caa == cab == cbb == 0:
        return 0
    rho = region.log_ratio()
    if rho is not None:
        # log a = rho * log b exactly; the sign is that of a rational number
        val = caa * rho * rho + cab * rho + cbb
        return (val > 0) - (val < 0)
    for bits in precision_ladder(prec, MAX_PRECISION):
        ah, bh = region.logs(bits)
        s = (caa * ah * ah + cab * ah * bh + cbb * bh * bh).sign()
        if s is not None:
            return s
    return None


def vertex_constraint_check(region: RegionParams, prec: int | None = None):
    """Check every vertex against every permuted half-space with certified nonstrict sign.

    Returns ``(ok, first_failure)`` with the failure as ``(vertex label, normal, sign)``.
    """
    for pt in _VERTICES[region.k]:
        for nrm in constraint_normals(region.k):
            s = _quadratic_sign(_quadratic_slack(nrm, pt), region, prec)
            if s is None or s < 0:
                return False, (VertexSet.label(pt), nrm, s)
    return True, None


@dataclass
class ConvexityReport:
    ok: bool
    samples: int
    decided_both: int
    agreements: int
    vertex_ok: bool
    first_disagreement: tuple | None = None
    vertex_failure: tuple | None = None


def _sample_log_points(region: RegionParams, samples: int, seed: int):
    """Stratified log points: a wide box, a tight box and a shell around the boundary."""
    rng = np.random.default_rng(seed)
    a_f = math.log(float(region.a))
    b_f = math.log(float(region.b))
    scale = max(a_f, b_f)
    dim = region.k - 1
    verts = np.array([[f[0] * a_f + f[1] * b_f for f in pt] for pt in _VERTICES[region.k]])
    outer = verts[1:]
    third = samples // 3
    out = []
    out.extend(rng.uniform(-2 * scale, 2 * scale, size=(third, dim)))
    out.extend(rng.uniform(-0.6 * scale, 0.6 * scale, size=(third, dim)))
    rest = samples - 2 * third
    i = rng.integers(0, len(outer), size=rest)
    j = rng.integers(0, len(outer), size=rest)
    t = rng.uniform(0, 1, size=(rest, 1))
    eps = rng.uniform(-0.05, 0.05, size=(rest, 1))
    out.extend((t * outer[i] + (1 - t) * outer[j]) * (1 + eps))
    return [tuple(Fraction(float(c)) for c in p) for p in out]


def verify_log_convexity(region: RegionParams, samples: int = 10_000, seed: int = 0,
                         prec: int | None = None) -> ConvexityReport:
    """Compare union-of-pieces and intersection-of-half-spaces membership on sampled log points.

    Also checks the vertex set against all half-space constraints, which
    fails exactly when the parameters leave the valid range.
    """
    prec = prec or default_precision()
    vertex_ok, vertex_failure = vertex_constraint_check(region, prec)
    decided = agree = 0
    first = None
    for pt in _sample_log_points(region, samples, seed):
        v = tuple(Interval.from_value(c, prec) for c in pt)
        m_int = membership_log(v, region, prec)
        m_uni = union_membership_log(v, region, prec)
        if m_int is Membership.UNDECIDED or m_uni is Membership.UNDECIDED:
            continue
        decided += 1
        if m_int == m_uni:
            agree += 1
        elif first is None:
            first = (pt, m_uni, m_int)
    return ConvexityReport(vertex_ok and first is None, samples, decided, agree, vertex_ok, first,
                           vertex_failure)


# -- slices -------------------------------------------------------------------

_SLICES = {
    3: {"(23)": "x <= 1 <= y <= l(x)", "(123)": "y <= 1 <= x <= l(y)"},
    4: {"(243)": "x <= 1 <= y <= z <= l(x)", "(134)": "z <= y <= 1 <= x <= y*l(z/y)"},
}


@dataclass(frozen=True)
class SliceDescription:
    """``T_{a,b}`` intersected with one ordering sector, written with ``l(x) = b * x**(log b / log a)``."""

    region: RegionParams
    tau: Permutation
    description: str

    def l(self, x, prec: int | None = None):
        """``b * x ** (log b / log a)`` as an interval enclosure (exact when ``x == 1``)."""
        x = x if isinstance(x, Interval) else Fraction(x)
        if not isinstance(x, Interval) and x == 1:
            return Fraction(self.region.b)
        rho = self.region.log_ratio()
        if rho is not None and not isinstance(x, Interval):
            expo = 1 / rho
            if expo.denominator == 1:
                return self.region.b * x ** int(expo)
        ah, bh = self.region.logs(prec)
        xi = Interval.from_value(x, prec or default_precision())
        return self.region.b * (bh / ah * xi.log()).exp()

    def contains(self, x: Sequence, prec: int | None = None) -> Membership:
        """Three-valued test of the slice inequalities (all nonstrict)."""
        key = str(self.tau)
        if key == "(23)":
            xx, yy = x
            chain = [(xx, 1), (1, yy), (yy, self.l(xx, prec))]
        elif key == "(123)":
            xx, yy = x
            chain = [(yy, 1), (1, xx), (xx, self.l(yy, prec))]
        elif key == "(243)":
            xx, yy, zz = x
            chain = [(xx, 1), (1, yy), (yy, zz), (zz, self.l(xx, prec))]
        else:
            xx, yy, zz = x
            yl = yy * self.l(Fraction(zz) / Fraction(yy) if not isinstance(zz, Interval)
                             and not isinstance(yy, Interval) else zz / yy, prec)
            chain = [(zz, yy), (yy, 1), (1, xx), (xx, yl)]
        status = [_le_status(lo, hi) for lo, hi in chain]
        if any(s == -1 for s in status):
            return Membership.OUTSIDE
        if all(s == 1 for s in status):
            return Membership.INSIDE
        return Membership.UNDECIDED


def explicit_slice(region: RegionParams, tau: Permutation | str) -> SliceDescription:
    if isinstance(tau, str):
        tau = Permutation.parse(region.k, tau)
    key = str(tau)
    if key not in _SLICES[region.k]:
        raise ValueError(f"unsupported sector {key} for k={region.k}; use one of {sorted(_SLICES[region.k])}")
    return SliceDescription(region, tau, _SLICES[region.k][key])


def _spread_ratio(region: RegionParams, prec: int | None):
    """``log a / log b``: exact when possible, otherwise an interval."""
    rho = region.log_ratio()
    if rho is not None:
        return rho
    ah, bh = region.logs(prec)
    return ah / bh


def simplex_over_approx(region: RegionParams, prec: int | None = None) -> list[tuple]:
    """Vertices of a simplex containing ``T_{a,b}`` on the sector ``(123)`` (k=3) or ``(134)`` (k=4).

    Requires ``a >= b``.  The last vertex is ``(1, .., 1, 1 - (b-1) log a / (b log b))``.
    """
    a, b = region.a, region.b
    if a < b:
        raise ValueError(f"simplex bound needs a >= b, got a={a}, b={b}")
    one = Fraction(1)
    last = 1 - (b - 1) / b * _spread_ratio(region, prec)
    if region.k == 3:
        return [(one, one), (b, one), (one, last)]
    return [(one, one, one), (b, one, one), (one, 1 / b, 1 / b), (one, one, last)]


def simplex_under_approx(region: RegionParams) -> list[tuple]:
    """Vertices of a simplex contained in ``T_{a,b}`` on the sector ``(23)`` (k=3) or ``(243)`` (k=4)."""
    a, b = region.a, region.b
    if a < b:
        raise ValueError(f"simplex bound needs a >= b, got a={a}, b={b}")
    one = Fraction(1)
    if region.k == 3:
        return [(one, one), (1 / a, one), (one, b)]
    return [(one, one, one), (1 / a, one, one), (one, b, b), (one, one, b)]


# -- image containment ---------------------------------------------------------

@dataclass
class ContainmentResult:
    certified: bool
    reason: str
    precision: int
    images: list = field(default_factory=list, repr=False)

    @property
    def verdict(self) -> str:
        return "certified" if self.certified else "not-certified"


def _positive(x) -> int:
    if isinstance(x, Interval):
        return 1 if x.certainly_positive() else (-1 if x.certainly_nonpositive() else 0)
    return 1 if x > 0 else -1


def _containment_once(source: RegionParams, target: RegionParams, params: PottsParams, prec: int):
    lifted = source.power(params.d)
    verts = simplex_over_approx(lifted, prec)
    images = []
    undecided = None
    for vtx in verts:
        dom = sum(vtx[1:], vtx[0]) + params.w
        s = _positive(dom)
        if s < 0:
            return False, f"vertex {vtx} leaves the domain of G", images
        if s == 0:
            undecided = "domain condition undecided"
            continue
        img = map_G(vtx, params)
        images.append(img)
        sector = [_le_status(lo, hi) for lo, hi in _sector_conditions(
            [xi if isinstance(xi, Interval) else Fraction(xi) for xi in _minus_one(img)])]
        if any(s == -1 for s in sector):
            return False, f"image {img} left the expected sector", images
        if not all(s == 1 for s in sector):
            undecided = "sector of an image vertex undecided"
        m = membership_log(_as_log_point(img, prec), target, prec)
        if m is Membership.OUTSIDE:
            return False, "an image vertex lies outside the target", images
        if m is Membership.UNDECIDED:
            undecided = "an image vertex is not certified strictly inside"
    if undecided:
        return None, undecided, images
    return True, "all image vertices strictly inside", images


def _minus_one(img):
    # sector tests in ratio space compare against the implicit coordinate 1;
    # shifting by -1 lets the log-space sector helper do the comparisons
    return [xi - 1 for xi in img]


def containment_check(source: RegionParams, target: RegionParams, params: PottsParams,
                      prec: int | None = None, max_prec: int = MAX_PRECISION) -> ContainmentResult:
    """Certify ``F(T_source) subset Int(T_target)``.

    The source is lifted to ``T_{a^d, b^d}`` (the image under entrywise powers),
    over-approximated on one sector by a simplex, and pushed through the
    linear-fractional map ``G`` vertex by vertex.  Every image vertex must sit
    in the target's sector of convexity and strictly inside the target; since
    the target slice is convex for ``a >= b`` and all regions are symmetric,
    that certifies the whole image.
    """
    if params.k != source.k or params.k != target.k:
        raise ValueError("colour counts of regions and parameters differ")
    for r, name in ((source, "source"), (target, "target")):
        if not r.valid:
            raise ValueError(f"{name} region parameters are outside the valid range")
        if r.a < r.b:
            raise ValueError(f"{name} region needs a >= b")
    prec = prec or default_precision()
    reason = "precision exhausted"
    last_bits = prec
    for bits in precision_ladder(prec, max_prec):
        last_bits = bits
        ok, reason, images = _containment_once(source, target, params, bits)
        if ok is not None:
            return ContainmentResult(ok, reason, bits, images)
    return ContainmentResult(False, reason, last_bits, [])


# -- export -------------------------------------------------------------------

def _fmt_float(x) -> str:
    return f"{float(x):.12f}"


def vertices_csv(region: RegionParams, prec: int | None = None) -> str:
    """Vertex list in log coordinates, one row per vertex, with a symbolic label."""
    vs = region_vertices(region)
    buf = io.StringIO()
    coords = ["x", "y", "z"][: region.k - 1]
    buf.write(",".join(["index", "label"] + coords) + "\n")
    for i, (form, pt) in enumerate(zip(vs.forms, vs.points(prec))):
        buf.write(",".join([str(i), '"' + VertexSet.label(form) + '"'] + [_fmt_float(c) for c in pt]) + "\n")
    return buf.getvalue()


def region_svg(region: RegionParams, size: int = 400, prec: int | None = None) -> str:
    """Deterministic SVG drawing of the k=3 log region with the six sector boundaries dashed."""
    if region.k != 3:
        raise ValueError("SVG export exists for k=3 only; use CSV for k=4")
    pts = [tuple(float(c) for c in p) for p in region_vertices(region).points(prec)][1:]
    pts.sort(key=lambda p: math.atan2(p[1], p[0]))
    extent = 1.25 * max(max(abs(c) for c in p) for p in pts)
    half = size / 2

    def sx(x):
        return f"{half + x / extent * half:.3f}"

    def sy(y):
        return f"{half - y / extent * half:.3f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    # sector boundaries: x = 0, y = 0 and x = y
    far = extent
    for (x0, y0, x1, y1) in ((0, -far, 0, far), (-far, 0, far, 0), (-far, -far, far, far)):
        lines.append(f'<line x1="{sx(x0)}" y1="{sy(y0)}" x2="{sx(x1)}" y2="{sy(y1)}" '
                     f'stroke="gray" stroke-dasharray="4,4"/>')
    poly = " ".join(f"{sx(x)},{sy(y)}" for x, y in pts)
    lines.append(f'<polygon points="{poly}" fill="#f4a261" fill-opacity="0.5" stroke="black"/>')
    for x, y in pts + [(0.0, 0.0)]:
        lines.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="3" fill="black"/>')
    lines.append(f'<text x="8" y="20" font-family="monospace" font-size="12">'
                 f'a={region.a} b={region.b}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
