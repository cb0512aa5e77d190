"""Potts parameters, the one-level ratio maps and the colour-permutation action.

A ratio point is a plain tuple of ``k - 1`` positive scalars: the ratios
``Z_i / Z_k`` for ``i < k``.  The implicit ``k``-th coordinate (always 1) is
never stored.  Scalars may be :class:`fractions.Fraction` (exact mode) or
:class:`~treepotts.interval.Interval` (certified mode); every map below works
for both because it only uses field operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .interval import Interval, default_precision

RatioPoint = tuple


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"``, an int or a Fraction.  Floats are refused."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"expected an exact rational, got {type(text).__name__}")


@dataclass(frozen=True)
class PottsParams:
    """Number of colours ``k``, branching factor ``d`` and edge weight ``w``."""

    k: int
    d: int
    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", parse_rational(self.w))
        if self.k not in (2, 3, 4):
            raise ValueError(f"k must be 2, 3 or 4, got {self.k}")
        if self.d < 2:
            raise ValueError(f"d must be at least 2, got {self.d}")
        if not 0 < self.w < 1:
            raise ValueError(f"w must satisfy 0 < w < 1, got {self.w}")

    @property
    def w_c(self) -> Fraction:
        """Uniqueness threshold ``max(0, 1 - k/(d+1))``."""
        return max(Fraction(0), 1 - Fraction(self.k, self.d + 1))

    @property
    def at_or_above_threshold(self) -> bool:
        return self.w >= self.w_c

    def with_w(self, w) -> "PottsParams":
        return PottsParams(self.k, self.d, w)


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..k}`` stored as ``images[i-1] = sigma(i)``."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation of 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def k(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(1, k + 1)))

    @classmethod
    def from_cycles(cls, k: int, cycles: Sequence[Sequence[int]] = ()) -> "Permutation":
        """Build from disjoint cycles; ``(2, 4, 3)`` sends 2 to 4, 4 to 3 and 3 to 2."""
        imgs = list(range(1, k + 1))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= k or a in seen:
                    raise ValueError(f"bad cycle {cyc} for k={k}")
                seen.add(a)
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    @classmethod
    def parse(cls, k: int, text: str) -> "Permutation":
        """Parse cycle notation such as ``"(13)(24)"`` or ``"id"``."""
        text = text.strip()
        if text in ("", "id", "()"):
            return cls.identity(k)
        cycles = []
        for chunk in text.replace(" ", "").strip("()").split(")("):
            cycles.append(tuple(int(c) for c in chunk.split(",")) if "," in chunk else tuple(int(c) for c in chunk))
        return cls.from_cycles(k, cycles)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.k + 1)))

    __matmul__ = compose

    def inverse(self) -> "Permutation":
        inv = [0] * self.k
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        out, seen = [], set()
        for start in range(1, self.k + 1):
            if start in seen or self(start) == start:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + "".join(map(str, c)) + ")" for c in cyc) if cyc else "id"


def all_permutations(k: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(1, k + 1))]


def reversal(k: int) -> Permutation:
    """The order-reversing permutation ``l -> k + 1 - l``."""
    return Permutation(tuple(range(k, 0, -1)))


def _full(x: Sequence) -> list:
    return list(x) + [Fraction(1)]


def mu(i: int, x: Sequence, params: PottsParams):
    """``(w - 1) x_i + sum_j x_j`` for a full length-``k`` vector ``x``."""
    if len(x) != params.k:
        raise ValueError(f"mu expects a length-{params.k} vector")
    if not 1 <= i <= params.k:
        raise IndexError(f"colour index {i} outside 1..{params.k}")
    return (params.w - 1) * x[i - 1] + sum(x[1:], x[0])


def map_G(x: Sequence, params: PottsParams) -> RatioPoint:
    """One application of ``G``: entry ``i`` is ``mu_i(x, 1) / mu_k(x, 1)``.

    An entry that is exactly the rational 1 maps to exactly 1 (it equals the
    implicit last coordinate), which keeps mixed exact/interval inputs tight.
    """
    _check_len(x, params)
    s = sum(x[1:], x[0]) + 1
    den = s + (params.w - 1)
    out = []
    for xi in x:
        if not isinstance(xi, Interval) and xi == 1:
            out.append(Fraction(1))
        else:
            out.append(((params.w - 1) * xi + s) / den)
    return tuple(out)


def map_F(x: Sequence, params: PottsParams) -> RatioPoint:
    """``F = G o (entrywise d-th power)``."""
    _check_len(x, params)
    return map_G(tuple(xi ** params.d for xi in x), params)


def perm_act(sigma: Permutation, x: Sequence) -> RatioPoint:
    """Colour relabelling: permute ``(x, 1)`` by ``sigma`` and renormalise the last entry."""
    k = sigma.k
    if len(x) != k - 1:
        raise ValueError(f"point has {len(x)} entries, permutation acts on k={k}")
    full = _full(x)
    inv = sigma.inverse()
    moved = [full[inv(j) - 1] for j in range(1, k + 1)]
    last = moved[-1]
    if not isinstance(last, Interval) and last == 1:
        return tuple(moved[:-1])
    return tuple(m / last for m in moved[:-1])


def sector_of(x: Sequence) -> Permutation:
    """A permutation ``tau`` with ``x_tau(1) <= ... <= x_tau(k)`` (exact inputs only).

    Ties are broken by colour index so the answer is deterministic.
    """
    full = _full(x)
    order = sorted(range(1, len(full) + 1), key=lambda j: (full[j - 1], j))
    return Permutation(tuple(order))


def in_sector(x: Sequence, tau: Permutation) -> bool:
    """Exact test of ``x_tau(1) <= ... <= x_tau(k)``."""
    full = _full(x)
    vals = [full[tau(j) - 1] for j in range(1, tau.k + 1)]
    return all(a <= b for a, b in zip(vals, vals[1:]))


def tree_recursion_step(children: Sequence[Sequence], params: PottsParams) -> RatioPoint:
    """Ratio at a pendant root from the ratios of its ``d`` split subtrees.

    Entry ``i`` is ``(sum_{l != i} P_l + w P_i + 1) / (sum_l P_l + w)`` with
    ``P_l`` the product of the children's ``l``-th entries.
    """
    if len(children) != params.d:
        raise ValueError(f"expected {params.d} children, got {len(children)}")
    prods = list(children[0])
    _check_len(prods, params)
    for c in children[1:]:
        _check_len(c, params)
        prods = [p * ci for p, ci in zip(prods, c)]
    return map_G(tuple(prods), params)


def base_case_ratios(fixed_color: int, params: PottsParams) -> RatioPoint:
    """Ratios at the pendant root of a single edge whose far end has a fixed colour."""
    k, w = params.k, params.w
    if not 1 <= fixed_color <= k:
        raise IndexError(f"colour {fixed_color} outside 1..{k}")
    if fixed_color == k:
        return tuple(1 / w for _ in range(k - 1))
    return tuple(w if i == fixed_color else Fraction(1) for i in range(1, k))


class ConvertDirection(str, Enum):
    HAT_TO_PLAIN = "hat_to_plain"
    PLAIN_TO_HAT = "plain_to_hat_inverse"


def hat_plain_convert(x: Sequence, direction, params: PottsParams) -> RatioPoint:
    """Switch between pendant-root and plain-root ratios of equal subtrees.

    ``hat_to_plain`` raises entries to the ``d``-th power (``d`` identical
    pendant subtrees glued at one root); ``plain_to_hat_inverse`` adds the
    pendant edge, which is exactly ``G``.
    """
    direction = ConvertDirection(direction)
    _check_len(x, params)
    if direction is ConvertDirection.HAT_TO_PLAIN:
        return tuple(xi ** params.d for xi in x)
    return map_G(x, params)


def to_log(x: Sequence, prec: int | None = None) -> tuple[Interval, ...]:
    """Entrywise logarithm as interval enclosures."""
    return tuple(Interval.from_value(xi, prec).log() for xi in x)


def from_log(v: Sequence[Interval]) -> tuple[Interval, ...]:
    return tuple(vi.exp() for vi in v)


def _check_len(x, params):
    if len(x) != params.k - 1:
        raise ValueError(f"ratio point must have {params.k - 1} entries, got {len(x)}")


# -- iteration probe ---------------------------------------------------------

class IterationVerdict(str, Enum):
    CONVERGED = "converged"
    CYCLING = "cycling"
    UNDECIDED = "undecided"


@dataclass
class IterationTrace:
    """Orbit of the convergence probe with per-step distance to all-ones."""

    orbit: list[tuple[Fraction, ...]] = field(default_factory=list)
    distances: list[float] = field(default_factory=list)
    verdict: IterationVerdict = IterationVerdict.UNDECIDED
    stop_step: int = 0
    cycle_length: int | None = None

    @property
    def final_distance(self) -> float:
        return self.distances[-1]


MAX_CYCLE_LAG = 16


def iterate_F(x0: Sequence, params: PottsParams, max_steps: int = 500, tol=Fraction(1, 10**9),
              prec: int | None = None) -> IterationTrace:
    """Run ``x -> F(x)`` from ``x0`` and classify the orbit.

    Each step is evaluated in interval arithmetic on the current point and the
    result is re-centred at its midpoint, so the probe is an accurate float-like
    simulation rather than a certificate.  The verdict is *converged* once every
    entry is within ``tol`` of 1, *cycling* when the point comes within ``tol``
    of one of the previous ``MAX_CYCLE_LAG`` points while still away from 1,
    and *undecided* otherwise.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    prec = prec or default_precision()
    x = tuple(Fraction(v) for v in x0)
    _check_len(x, params)
    if any(v <= 0 for v in x):
        raise ValueError("starting point must be positive")
    trace = IterationTrace()
    for step in range(max_steps + 1):
        dist = max(abs(v - 1) for v in x)
        trace.orbit.append(x)
        trace.distances.append(float(dist))
        trace.stop_step = step
        if dist < tol:
            trace.verdict = IterationVerdict.CONVERGED
            return trace
        for lag in range(1, min(MAX_CYCLE_LAG, step) + 1):
            prev = trace.orbit[-1 - lag]
            if max(abs(a - b) for a, b in zip(x, prev)) < tol:
                trace.verdict = IterationVerdict.CYCLING
                trace.cycle_length = lag
                return trace
        if step == max_steps:
            break
        y = map_F(tuple(Interval.from_value(v, prec) for v in x), params)
        x = tuple(v.mid_fraction() for v in y)
    trace.verdict = IterationVerdict.UNDECIDED
    return trace


def preset_point(name: str, params: PottsParams) -> RatioPoint:
    """Named starting points: ``corner`` is all ``1/w``, ``spike-i`` has ``w`` at entry ``i``."""
    name = name.strip().lower()
    if name == "corner":
        return base_case_ratios(params.k, params)
    if name.startswith("spike-"):
        try:
            i = int(name.split("-", 1)[1])
        except ValueError:
            raise ValueError(f"bad preset {name!r}") from None
        if not 1 <= i <= params.k - 1:
            raise ValueError(f"spike index must be in 1..{params.k - 1}")
        return base_case_ratios(i, params)
    if name == "ones":
        return tuple(Fraction(1) for _ in range(params.k - 1))
    raise ValueError(f"unknown preset {name!r}")
