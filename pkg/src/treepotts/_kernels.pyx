# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 version of the boundary-enumeration kernel."""

import numpy as np

from libc.stdlib cimport malloc, free


def root_messages(const signed char[:, ::1] colors, int k, int d, int n,
                  long long p, long long q, bint hat):
    """Same contract as the numpy fallback, restricted to int64 results.

    The caller guarantees that no intermediate value overflows 64 bits.
    """
    cdef Py_ssize_t num = colors.shape[0]
    cdef Py_ssize_t leaves = colors.shape[1]
    cdef Py_ssize_t r, v, c, s, width, child
    cdef long long total, prod
    cdef long long *buf
    cdef long long *nxt
    cdef long long *tmp
    out = np.empty((num, k), dtype=np.int64)
    cdef long long[:, ::1] res = out
    if num == 0:
        return out
    buf = <long long *> malloc(leaves * k * sizeof(long long))
    nxt = <long long *> malloc(leaves * k * sizeof(long long))
    if buf == NULL or nxt == NULL:
        free(buf)
        free(nxt)
        raise MemoryError()
    try:
        with nogil:
            for r in range(num):
                for v in range(leaves):
                    for c in range(k):
                        buf[v * k + c] = 1 if colors[r, v] == c + 1 else 0
                width = leaves
                for s in range(n):
                    width = width // d
                    for v in range(width):
                        for c in range(k):
                            nxt[v * k + c] = 1
                        for child in range(v * d, v * d + d):
                            total = 0
                            for c in range(k):
                                total = total + buf[child * k + c]
                            for c in range(k):
                                prod = q * total - (q - p) * buf[child * k + c]
                                nxt[v * k + c] = nxt[v * k + c] * prod
                    tmp = buf
                    buf = nxt
                    nxt = tmp
                if hat:
                    total = 0
                    for c in range(k):
                        total = total + buf[c]
                    for c in range(k):
                        res[r, c] = q * total - (q - p) * buf[c]
                else:
                    for c in range(k):
                        res[r, c] = buf[c]
    finally:
        free(buf)
        free(nxt)
    return out
