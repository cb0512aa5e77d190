"""Pure numpy version of the boundary-enumeration kernel.

Works for any integer dtype, including ``object`` arrays of Python ints, so it
doubles as the overflow-free path.
"""

from __future__ import annotations

import numpy as np


def root_messages(colors: np.ndarray, k: int, d: int, n: int, p: int, q: int, hat: bool,
                  dtype=np.int64) -> np.ndarray:
    """Scaled root partition functions for a batch of boundary conditions.

    ``colors`` has shape ``(N, d**n)`` with 1-based leaf colours in
    depth-first leaf order.  With ``w = p/q`` every edge contributes ``p`` when
    its endpoints agree and ``q`` otherwise, so row ``r`` of the result is
    ``q**E * (Z_1, ..., Z_k)`` for the pinned-root partition functions.
    """
    colors = np.asarray(colors)
    num, leaves = colors.shape
    if leaves != d ** n:
        raise ValueError(f"expected {d ** n} leaf colours, got {leaves}")
    palette = np.arange(1, k + 1, dtype=colors.dtype)
    m = (colors[:, :, None] == palette).astype(dtype)
    width = leaves
    for _ in range(n):
        s = m.sum(axis=2, keepdims=True)
        t = q * s - (q - p) * m
        width //= d
        m = t.reshape(num, width, d, k).prod(axis=2)
    m = m.reshape(num, k)
    if hat:
        m = q * m.sum(axis=1, keepdims=True) - (q - p) * m
    return m
