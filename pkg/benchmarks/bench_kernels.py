"""Compare the compiled message kernel with the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from treepotts.bruteforce import KERNEL_BACKEND, index_to_colors, root_messages
from treepotts.maps import PottsParams

CASES = [
    (3, 2, 2, Fraction(1, 2)),
    (4, 2, 2, Fraction(1, 5)),
    (3, 3, 2, Fraction(1, 4)),
    (4, 3, 2, Fraction(1, 3)),
]


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"compiled kernel available: {KERNEL_BACKEND == 'cython'}")
    print(f"{'k':>2} {'d':>2} {'n':>2} {'rows':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for k, d, n, w in CASES:
        params = PottsParams(k, d, w)
        total = k ** (d ** n)
        cols = index_to_colors(np.arange(total), k, d ** n)
        py = best_of(lambda: root_messages(cols, n, params, hat=True, backend="python"), args.repeat)
        if KERNEL_BACKEND == "cython":
            cy = best_of(lambda: root_messages(cols, n, params, hat=True, backend="cython"), args.repeat)
            same = np.array_equal(root_messages(cols, n, params, True, backend="cython"),
                                  root_messages(cols, n, params, True, backend="python"))
            assert same, "backends disagree"
            print(f"{k:>2} {d:>2} {n:>2} {total:>8} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")
        else:
            print(f"{k:>2} {d:>2} {n:>2} {total:>8} {py:>10.4f} {'n/a':>10} {'n/a':>8}")


if __name__ == "__main__":
    main()
