"""Ground-truth partition functions on finite trees.

Three independent routes give the same numbers: a leaf-to-root dynamic
program over exact rationals, plain enumeration of all colourings of the free
vertices (small trees only), and a vectorised integer kernel that processes
many boundary conditions at once.  The tree recursion in :mod:`treepotts.maps`
is checked against all of them.
"""

from __future__ import annotations

import csv
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels_py
from .maps import PottsParams, base_case_ratios, tree_recursion_step

try:
    from . import _kernels as _kernels_c
except ImportError:  # pragma: no cover - depends on the build
    _kernels_c = None

KERNEL_BACKEND = "cython" if _kernels_c is not None else "python"

MAX_EXHAUSTIVE_LEAVES = 10
MAX_ENUMERATION_FREE = 12
_INT64_LIMIT = 2 ** 62


@dataclass(frozen=True)
class FiniteTree:
    """Complete ``d``-ary tree of depth ``n``, optionally with a pendant root.

    Vertices are numbered breadth first.  Without ``hat`` vertex 0 is the root
    and has ``d`` children; with ``hat`` vertex 0 is an extra root whose only
    child (vertex 1) is the root of the depth-``n`` tree.  Leaves come last, in
    depth-first order, which is the order used by boundary conditions.
    """

    d: int
    n: int
    hat: bool = False
    parent: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.d < 1 or self.n < 0:
            raise ValueError("need d >= 1 and n >= 0")
        parent = [-1]
        if self.hat:
            parent.append(0)
        level = [len(parent) - 1]
        for _ in range(self.n):
            nxt = []
            for v in level:
                for _ in range(self.d):
                    parent.append(v)
                    nxt.append(len(parent) - 1)
            level = nxt
        object.__setattr__(self, "parent", tuple(parent))

    @property
    def root(self) -> int:
        return 0

    @property
    def num_vertices(self) -> int:
        return len(self.parent)

    @property
    def num_leaves(self) -> int:
        return self.d ** self.n

    @property
    def leaves(self) -> range:
        return range(self.num_vertices - self.num_leaves, self.num_vertices)

    def children(self, v: int) -> list[int]:
        return [u for u, p in enumerate(self.parent) if p == v]

    def free_vertices(self) -> list[int]:
        """Vertices that are neither the pinned root nor boundary leaves."""
        first_leaf = self.num_vertices - self.num_leaves
        return [v for v in range(1, first_leaf)]

    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in enumerate(self.parent) if p >= 0]


def _check_boundary(tree: FiniteTree, tau, k: int) -> tuple[int, ...]:
    if isinstance(tau, dict):
        missing = [i for i in range(tree.num_leaves) if i not in tau]
        if missing:
            raise ValueError(f"boundary condition is not total: leaves {missing} uncoloured")
        tau = tuple(tau[i] for i in range(tree.num_leaves))
    tau = tuple(int(c) for c in tau)
    if len(tau) != tree.num_leaves:
        raise ValueError(f"boundary condition is not total: {len(tau)} colours for {tree.num_leaves} leaves")
    if any(not 1 <= c <= k for c in tau):
        raise ValueError(f"boundary colours must lie in 1..{k}")
    return tau


def restricted_partition_function(tree: FiniteTree, tau, root_color: int, params: PottsParams) -> Fraction:
    """Exact partition function with the leaves fixed by ``tau`` and the root fixed to ``root_color``."""
    k, w = params.k, params.w
    tau = _check_boundary(tree, tau, k)
    if not 1 <= root_color <= k:
        raise IndexError(f"root colour {root_color} outside 1..{k}")
    first_leaf = tree.num_vertices - tree.num_leaves
    if first_leaf == 0:
        # the root is itself the only boundary vertex
        return Fraction(1) if tau[0] == root_color else Fraction(0)
    msgs: dict[int, list[Fraction]] = {}
    for j, v in enumerate(tree.leaves):
        msgs[v] = [Fraction(1) if tau[j] == c else Fraction(0) for c in range(1, k + 1)]
    kids: dict[int, list[int]] = {}
    for v, p in enumerate(tree.parent):
        if p >= 0:
            kids.setdefault(p, []).append(v)
    for v in range(first_leaf - 1, -1, -1):
        m = [Fraction(1)] * k
        for u in kids[v]:
            mu_ = msgs.pop(u)
            s = sum(mu_)
            for c in range(k):
                m[c] *= s - (1 - w) * mu_[c]
        msgs[v] = m
    return msgs[0][root_color - 1]


def partition_function_enumerated(tree: FiniteTree, tau, root_color: int, params: PottsParams) -> Fraction:
    """Same quantity as :func:`restricted_partition_function` by summing over every colouring."""
    k, w = params.k, params.w
    tau = _check_boundary(tree, tau, k)
    free = tree.free_vertices()
    if len(free) > MAX_ENUMERATION_FREE:
        raise ValueError(f"{len(free)} free vertices exceeds the enumeration limit {MAX_ENUMERATION_FREE}")
    if tree.num_vertices == 1:
        return Fraction(1) if tau[0] == root_color else Fraction(0)
    colour = [0] * tree.num_vertices
    for j, v in enumerate(tree.leaves):
        colour[v] = tau[j]
    if colour[0] and colour[0] != root_color:
        return Fraction(0)
    colour[0] = root_color
    edges = tree.edges()
    total = Fraction(0)
    for assignment in itertools.product(range(1, k + 1), repeat=len(free)):
        for v, c in zip(free, assignment):
            colour[v] = c
        mono = sum(1 for a, b in edges if colour[a] == colour[b])
        total += w ** mono
    return total


def ratios_bruteforce(tree: FiniteTree, tau, params: PottsParams) -> tuple[Fraction, ...]:
    """Root ratios ``Z_i / Z_k`` for ``i < k``."""
    zs = [restricted_partition_function(tree, tau, c, params) for c in range(1, params.k + 1)]
    assert zs[-1] != 0, "Z_k vanishes although w > 0"
    return tuple(z / zs[-1] for z in zs[:-1])


def root_marginals(tree: FiniteTree, tau, params: PottsParams) -> tuple[Fraction, ...]:
    """``Pr(root = c | tau)`` for ``c = 1..k``."""
    zs = [restricted_partition_function(tree, tau, c, params) for c in range(1, params.k + 1)]
    total = sum(zs)
    return tuple(z / total for z in zs)


# -- recursion side ----------------------------------------------------------

class RecursionTable:
    """Memoised tree-recursion ratios keyed by the leaf colours of a subtree."""

    def __init__(self, params: PottsParams):
        self.params = params
        self._hat: dict[tuple[int, ...], tuple[Fraction, ...]] = {}

    def hat(self, block: Sequence[int]) -> tuple[Fraction, ...]:
        """Pendant-root ratios of a complete subtree whose leaves are coloured by ``block``."""
        block = tuple(block)
        hit = self._hat.get(block)
        if hit is not None:
            return hit
        d = self.params.d
        if len(block) == 1:
            val = base_case_ratios(block[0], self.params)
        else:
            step = len(block) // d
            kids = [self.hat(block[i * step:(i + 1) * step]) for i in range(d)]
            val = tree_recursion_step(kids, self.params)
        self._hat[block] = val
        return val

    def plain(self, block: Sequence[int]) -> tuple[Fraction, ...]:
        """Root ratios of the plain tree: product of the ``d`` pendant subtrees."""
        block = tuple(block)
        d = self.params.d
        if len(block) == 1:
            raise ValueError("the depth-0 plain tree has its root on the boundary; ratios are undefined")
        step = len(block) // d
        out = None
        for i in range(d):
            r = self.hat(block[i * step:(i + 1) * step])
            out = r if out is None else tuple(a * b for a, b in zip(out, r))
        return out

    def ratios(self, block: Sequence[int], hat: bool) -> tuple[Fraction, ...]:
        return self.hat(block) if hat else self.plain(block)


def recursion_ratios(n: int, tau: Sequence[int], params: PottsParams, hat: bool = True,
                     table: RecursionTable | None = None) -> tuple[Fraction, ...]:
    """Root ratios obtained from the tree recursion instead of from partition functions."""
    table = table or RecursionTable(params)
    if len(tau) != params.d ** n:
        raise ValueError("boundary condition has the wrong length")
    return table.ratios(tau, hat)


# -- batched enumeration -----------------------------------------------------

def num_boundaries(n: int, params: PottsParams) -> int:
    return params.k ** (params.d ** n)


def index_to_colors(indices: np.ndarray, k: int, leaves: int) -> np.ndarray:
    """Decode boundary indices (base ``k``, leaf 0 most significant) into 1-based colours."""
    idx = np.asarray(indices, dtype=np.int64).copy()
    out = np.empty((idx.shape[0], leaves), dtype=np.int8)
    for j in range(leaves - 1, -1, -1):
        out[:, j] = idx % k + 1
        idx //= k
    return out


def colors_to_index(tau: Sequence[int], k: int) -> int:
    idx = 0
    for c in tau:
        idx = idx * k + (int(c) - 1)
    return idx


def _message_bound(params: PottsParams, n: int, hat: bool, q: int) -> int:
    bound = 1
    for _ in range(n):
        bound = (q * params.k * bound) ** params.d
    if hat:
        bound *= q * params.k
    return bound


def root_messages(colors: np.ndarray, n: int, params: PottsParams, hat: bool,
                  backend: str | None = None) -> np.ndarray:
    """Integer-scaled root partition functions for every row of ``colors``.

    Uses the compiled kernel when it is available and the values fit in 64
    bits, otherwise the numpy fallback (with Python integers if needed).
    ``backend`` forces ``"cython"`` or ``"python"``.
    """
    p, q = params.w.numerator, params.w.denominator
    fits = _message_bound(params, n, hat, q) < _INT64_LIMIT
    colors = np.ascontiguousarray(colors, dtype=np.int8)
    if backend is None:
        backend = "cython" if (fits and _kernels_c is not None) else "python"
    if backend == "cython":
        if _kernels_c is None:
            raise RuntimeError("compiled kernel is not available")
        if not fits:
            raise OverflowError("values exceed 64 bits; use the python backend")
        return _kernels_c.root_messages(colors, params.k, params.d, n, p, q, hat)
    dtype = np.int64 if fits else object
    return _kernels_py.root_messages(colors, params.k, params.d, n, p, q, hat, dtype=dtype)


def _boundary_batches(n: int, params: PottsParams, sample: int | None, seed: int, chunk: int):
    """Yield ``(indices, colors)`` batches covering every boundary or a seeded sample."""
    leaves = params.d ** n
    k = params.k
    if sample is None:
        total = k ** leaves
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            yield idx, index_to_colors(idx, k, leaves)
    else:
        rng = np.random.default_rng(seed)
        done = 0
        while done < sample:
            size = min(chunk, sample - done)
            cols = rng.integers(1, k + 1, size=(size, leaves), dtype=np.int8)
            yield np.arange(done, done + size, dtype=np.int64), cols
            done += size


def _guard(n: int, params: PottsParams, sample: int | None):
    if sample is None and params.d ** n > MAX_EXHAUSTIVE_LEAVES:
        raise ValueError(
            f"d^n = {params.d ** n} leaves exceeds the exhaustive limit {MAX_EXHAUSTIVE_LEAVES}; "
            "pass a sample size"
        )
    if sample is not None and sample <= 0:
        raise ValueError("sample size must be positive")


@dataclass(frozen=True)
class DeviationResult:
    deviation: Fraction
    witness: tuple[int, ...]
    color: int
    evaluated: int
    sampled: bool


def _batch_best_deviation(m: np.ndarray, cols: np.ndarray, k: int):
    tot = m.sum(axis=1)
    mf = m.astype(float)
    tf = tot.astype(float)
    dev = np.abs(mf / tf[:, None] - 1.0 / k)
    row_best = dev.max(axis=1)
    top = row_best.max()
    cand = np.nonzero(row_best >= top * (1 - 1e-9) - 1e-300)[0]
    best = None
    for r in cand:
        s = int(tot[r])
        for c in range(k):
            val = Fraction(abs(k * int(m[r, c]) - s), k * s)
            key = (val, -int(r), -c)
            if best is None or key > best[0]:
                best = (key, tuple(int(x) for x in cols[r]), c + 1)
    return best


def worst_case_deviation(n: int, params: PottsParams, sample: int | None = None, seed: int = 0,
                         workers: int = 1, chunk: int = 1 << 15) -> DeviationResult:
    """Largest ``|Pr(root = c | tau) - 1/k|`` over boundary conditions ``tau`` of the plain tree.

    Exhaustive when ``d**n <= 10``; otherwise a seeded uniform sample of size
    ``sample`` is required.  The maximum is exact; ties go to the first
    boundary in enumeration order and the smallest colour, independent of
    ``workers``.
    """
    _guard(n, params, sample)
    k = params.k
    if n == 0:
        return DeviationResult(1 - Fraction(1, k), (1,), 1, 1, False)

    def work(batch):
        idx, cols = batch
        m = root_messages(cols, n, params, hat=False)
        best = _batch_best_deviation(m, cols, k)
        (val, negr, negc), witness, colour = best
        return val, int(idx[-negr]), witness, colour

    batches = _boundary_batches(n, params, sample, seed, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, batches))
    else:
        results = [work(b) for b in batches]
    evaluated = num_boundaries(n, params) if sample is None else sample
    best = max(results, key=lambda r: (r[0], -r[1], -r[3]))
    return DeviationResult(best[0], best[2], best[3], evaluated, sample is not None)


def ratios_from_messages(m: np.ndarray) -> list[tuple[Fraction, ...]]:
    k = m.shape[1]
    return [tuple(Fraction(int(row[c]), int(row[k - 1])) for c in range(k - 1)) for row in m]


def all_ratios(n: int, params: PottsParams, hat: bool = True, sample: int | None = None,
               seed: int = 0, chunk: int = 1 << 15):
    """Yield ``(colors, ratio)`` for every (or a sampled) boundary condition."""
    for _, cols in _boundary_batches(n, params, sample, seed, chunk):
        m = root_messages(cols, n, params, hat=hat)
        for row_cols, r in zip(cols, ratios_from_messages(m)):
            yield tuple(int(c) for c in row_cols), r


def distinct_ratios(n: int, params: PottsParams, hat: bool = True, sample: int | None = None,
                    seed: int = 0) -> dict[tuple[Fraction, ...], tuple[int, ...]]:
    """Distinct root ratio vectors, each with the first boundary producing it."""
    out: dict[tuple[Fraction, ...], tuple[int, ...]] = {}
    for _, cols in _boundary_batches(n, params, sample, seed, 1 << 15):
        m = root_messages(cols, n, params, hat=hat)
        seen_rows: dict[tuple[int, ...], int] = {}
        for r, row in enumerate(m):
            key = tuple(int(v) for v in row)
            if key not in seen_rows:
                seen_rows[key] = r
        for key, r in seen_rows.items():
            ratio = tuple(Fraction(key[c], key[-1]) for c in range(len(key) - 1))
            out.setdefault(ratio, tuple(int(c) for c in cols[r]))
    return out


@dataclass(frozen=True)
class RegionCheck:
    ok: bool
    checked: int
    distinct: int
    violation: tuple | None = None


def all_ratios_in_region(n: int, params: PottsParams, region, sample: int | None = None,
                         seed: int = 0) -> RegionCheck:
    """Check that every pendant-root ratio vector at depth ``n`` is certified inside ``region``.

    The first vector that is not certified inside is returned as
    ``(boundary, ratio, membership)``.
    """
    from .regions import Membership, region_membership

    _guard(n, params, sample)
    found = distinct_ratios(n, params, hat=True, sample=sample, seed=seed)
    checked = num_boundaries(n, params) if sample is None else sample
    for ratio in sorted(found, key=lambda r: colors_to_index(found[r], params.k)):
        verdict = region_membership(ratio, region)
        if verdict is not Membership.INSIDE:
            return RegionCheck(False, checked, len(found), (found[ratio], ratio, verdict))
    return RegionCheck(True, checked, len(found))


def recursion_matches_oracle(n: int, params: PottsParams, hat: bool = True) -> tuple[bool, int, tuple | None]:
    """Compare recursion ratios with integer-kernel ratios on every boundary condition.

    Returns ``(all_equal, count, first_mismatch)``.
    """
    table = RecursionTable(params)
    count = 0
    for cols, ratio in all_ratios(n, params, hat=hat):
        count += 1
        rec = table.ratios(cols, hat)
        if rec != ratio:
            return False, count, (cols, ratio, rec)
    return True, count, None


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def write_bruteforce_csv(handle, n: int, params: PottsParams, sample: int | None = None,
                         seed: int = 0) -> DeviationResult:
    """Dump one row per boundary condition of the plain depth-``n`` tree.

    Columns: boundary index and colours, root ratios, root marginals, the
    row's deviation from uniform, and the largest gap between the oracle and
    the tree-recursion ratios (always ``0/1`` unless something is broken).
    """
    _guard(n, params, sample)
    k = params.k
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["tau_index", "tau"] + [f"R_{i}" for i in range(1, k)]
                    + [f"P_{c}" for c in range(1, k + 1)] + ["deviation", "recursion_diff"])
    table = RecursionTable(params)
    best = None
    count = 0
    for idx, cols in _boundary_batches(n, params, sample, seed, 1 << 15):
        if n == 0:
            m = np.zeros((len(cols), k), dtype=np.int64)
            m[np.arange(len(cols)), cols[:, 0] - 1] = 1
        else:
            m = root_messages(cols, n, params, hat=False)
        for i, row in zip(idx, range(len(cols))):
            tau = tuple(int(c) for c in cols[row])
            zs = [int(v) for v in m[row]]
            s = sum(zs)
            marg = [Fraction(z, s) for z in zs]
            dev = max(abs(pm - Fraction(1, k)) for pm in marg)
            if n == 0:
                ratio_cells = ["" for _ in range(k - 1)]
                diff = ""
            else:
                ratio = tuple(Fraction(zs[c], zs[-1]) for c in range(k - 1))
                rec = table.plain(tau)
                diff = _fmt(max(abs(a - b) for a, b in zip(ratio, rec)))
                ratio_cells = [_fmt(r) for r in ratio]
            ti = colors_to_index(tau, k) if sample is None else int(i)
            writer.writerow([ti, "".join(map(str, tau))] + ratio_cells + [_fmt(x) for x in marg]
                            + [_fmt(dev), diff])
            count += 1
            key = (dev, -count)
            if best is None or key > best[0]:
                colour = max(range(k), key=lambda c: (abs(marg[c] - Fraction(1, k)), -c)) + 1
                best = (key, tau, colour)
    return DeviationResult(best[0][0], best[1], best[2], count, sample is not None)


def iter_boundaries(n: int, k: int, d: int) -> Iterable[tuple[int, ...]]:
    """All boundary conditions in index order (small trees only)."""
    return itertools.product(range(1, k + 1), repeat=d ** n)


__all__ = [
    "FiniteTree", "restricted_partition_function", "partition_function_enumerated",
    "ratios_bruteforce", "root_marginals", "RecursionTable", "recursion_ratios",
    "worst_case_deviation", "all_ratios_in_region", "root_messages", "write_bruteforce_csv",
    "KERNEL_BACKEND", "index_to_colors", "colors_to_index", "DeviationResult", "RegionCheck",
    "recursion_matches_oracle", "distinct_ratios",
]
