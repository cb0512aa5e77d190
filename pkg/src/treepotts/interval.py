"""Outward-rounded interval arithmetic on top of mpmath's ``libmp`` layer.

Every operation returns an interval that encloses the exact result of the
same operation applied to any points of the operand intervals.  Endpoints are
raw mpf tuples; rounding direction is always explicit, so no global mpmath
context is touched and instances are safe to share between threads.
"""

from __future__ import annotations

import functools
import os
from fractions import Fraction
from numbers import Rational

from mpmath.libmp import (
    fone,
    fzero,
    from_int,
    from_rational,
    libmpi,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_le,
    mpf_lt,
    mpf_neg,
    mpf_shift,
    mpf_sub,
    to_float,
    to_rational,
    to_str,
)

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024


def default_precision() -> int:
    """Working precision in bits, overridable through ``POTTS_PRECISION_BITS``."""
    raw = os.environ.get("POTTS_PRECISION_BITS")
    if not raw:
        return DEFAULT_PRECISION
    bits = int(raw)
    if bits < 16:
        raise ValueError(f"POTTS_PRECISION_BITS must be >= 16, got {bits}")
    return bits


def precision_ladder(start: int | None = None, limit: int = MAX_PRECISION):
    """Yield start, 2*start, ... up to ``limit`` (always at least one value)."""
    bits = start or default_precision()
    yield bits
    while bits * 2 <= limit:
        bits *= 2
        yield bits


def _mpf_to_fraction(x) -> Fraction:
    p, q = to_rational(x)
    return Fraction(int(p), int(q))


def _widen(iv, prec):
    # libmp rounds transcendental results in the requested direction; pad by a
    # few ulps anyway so a last-bit slip can never cost soundness.
    lo, hi = iv
    lo = mpf_sub(lo, mpf_shift(mpf_abs(lo), -(prec - 3)), prec, "f")
    hi = mpf_add(hi, mpf_shift(mpf_abs(hi), -(prec - 3)), prec, "c")
    return lo, hi


class Interval:
    """Closed interval ``[lo, hi]`` with outward rounding at ``prec`` bits."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec: int):
        if mpf_lt(hi, lo):
            raise ValueError("interval with lo > hi")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # -- construction -------------------------------------------------
    @classmethod
    def from_value(cls, value, prec: int | None = None) -> "Interval":
        """Enclose an int, Fraction, float or Interval at ``prec`` bits."""
        prec = prec or default_precision()
        if isinstance(value, Interval):
            return value if value.prec >= prec else cls(value.lo, value.hi, prec)
        if isinstance(value, int):
            return cls(from_int(value, prec, "f"), from_int(value, prec, "c"), prec)
        if isinstance(value, Rational):
            p, q = int(value.numerator), int(value.denominator)
            return cls(from_rational(p, q, prec, "f"), from_rational(p, q, prec, "c"), prec)
        if isinstance(value, float):
            return cls.from_value(Fraction(value), prec)
        if isinstance(value, str):
            return cls.from_value(Fraction(value), prec)
        raise TypeError(f"cannot build an interval from {type(value).__name__}")

    @classmethod
    def hull(cls, lo, hi, prec: int | None = None) -> "Interval":
        """Smallest enclosure of ``[lo, hi]`` for rational endpoints."""
        a = cls.from_value(lo, prec)
        b = cls.from_value(hi, prec)
        return cls(a.lo, b.hi, max(a.prec, b.prec))

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        if isinstance(other, int) and -64 <= other <= 64:
            return _small_int(other, self.prec)
        return Interval.from_value(other, self.prec)

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _wrap(iv, prec):
        # results of libmpi are ordered by construction; skip the check
        out = object.__new__(Interval)
        out.lo, out.hi, out.prec = iv[0], iv[1], prec
        return out

    def __add__(self, other):
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_add((self.lo, self.hi), (other.lo, other.hi), prec), prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_sub((self.lo, self.hi), (other.lo, other.hi), prec), prec)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_mul((self.lo, self.hi), (other.lo, other.hi), prec), prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if not (mpf_lt(fzero, other.lo) or mpf_lt(other.hi, fzero)):
            raise ZeroDivisionError("interval divisor contains zero")
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_div((self.lo, self.hi), (other.lo, other.hi), prec), prec)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return self._wrap((mpf_neg(self.hi), mpf_neg(self.lo)), self.prec)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if isinstance(n, int):
            if n < 0:
                return 1 / (self ** (-n))
            return self._wrap(libmpi.mpi_pow_int((self.lo, self.hi), n, self.prec), self.prec)
        return interval_pow(self, n)

    def __abs__(self):
        if not mpf_lt(self.lo, fzero):
            return self
        if not mpf_lt(fzero, self.hi):
            return -self
        return Interval(fzero, max(mpf_neg(self.lo), self.hi, key=_sort_key), self.prec)

    def log(self) -> "Interval":
        if not mpf_lt(fzero, self.lo):
            raise ValueError("log of an interval that is not strictly positive")
        return self._wrap(_widen(libmpi.mpi_log((self.lo, self.hi), self.prec), self.prec), self.prec)

    def exp(self) -> "Interval":
        return self._wrap(_widen(libmpi.mpi_exp((self.lo, self.hi), self.prec), self.prec), self.prec)

    # -- certified comparisons ----------------------------------------
    def certainly_positive(self) -> bool:
        return mpf_lt(fzero, self.lo)

    def certainly_negative(self) -> bool:
        return mpf_lt(self.hi, fzero)

    def certainly_nonpositive(self) -> bool:
        return mpf_le(self.hi, fzero)

    def certainly_nonnegative(self) -> bool:
        return mpf_le(fzero, self.lo)

    def certainly_lt(self, other) -> bool:
        other = self._coerce(other)
        return mpf_lt(self.hi, other.lo)

    def certainly_gt(self, other) -> bool:
        other = self._coerce(other)
        return mpf_lt(other.hi, self.lo)

    def certainly_le(self, other) -> bool:
        other = self._coerce(other)
        return mpf_le(self.hi, other.lo)

    def certainly_ge(self, other) -> bool:
        other = self._coerce(other)
        return mpf_le(other.hi, self.lo)

    def sign(self) -> int | None:
        """+1 or -1 when certified, 0 for the exact point zero, else None."""
        if self.certainly_positive():
            return 1
        if self.certainly_negative():
            return -1
        if self.lo == fzero and self.hi == fzero:
            return 0
        return None

    def contains(self, x) -> bool:
        """Exact containment test for a rational (or float) point."""
        x = Fraction(x)
        return self.lo_fraction() <= x <= self.hi_fraction()

    def overlaps(self, other: "Interval") -> bool:
        return not (mpf_lt(self.hi, other.lo) or mpf_lt(other.hi, self.lo))

    # -- inspection ---------------------------------------------------
    def lo_fraction(self) -> Fraction:
        return _mpf_to_fraction(self.lo)

    def hi_fraction(self) -> Fraction:
        return _mpf_to_fraction(self.hi)

    def mid(self) -> "Interval":
        """Degenerate interval at the (rounded) midpoint."""
        m = libmpi.mpi_mid((self.lo, self.hi), self.prec)
        return Interval(m, m, self.prec)

    def mid_fraction(self) -> Fraction:
        return (self.lo_fraction() + self.hi_fraction()) / 2

    def width(self) -> float:
        return to_float(mpf_sub(self.hi, self.lo, 53, "c"))

    def __float__(self) -> float:
        return to_float(libmpi.mpi_mid((self.lo, self.hi), 53))

    def is_point(self) -> bool:
        return mpf_cmp(self.lo, self.hi) == 0

    def __repr__(self) -> str:
        return f"Interval([{to_str(self.lo, 20)}, {to_str(self.hi, 20)}], prec={self.prec})"

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))


@functools.lru_cache(maxsize=1024)
def _small_int(value: int, prec: int) -> Interval:
    return Interval.from_value(value, prec)


def _sort_key(x):
    return _mpf_to_fraction(x)


def as_interval(x, prec: int | None = None) -> Interval:
    return Interval.from_value(x, prec)


def interval_log(x, prec: int | None = None) -> Interval:
    return as_interval(x, prec).log()


def interval_pow(base, exponent, prec: int | None = None) -> Interval:
    """Enclosure of ``base ** exponent`` for a strictly positive base.

    Computed as ``exp(exponent * log(base))``; a base of exactly one gives the
    exact point one.
    """
    if isinstance(base, Interval) and prec is None:
        prec = base.prec
    b = as_interval(base, prec)
    if not b.certainly_positive():
        raise ValueError("interval_pow needs a strictly positive base")
    if isinstance(exponent, int) and not isinstance(exponent, bool):
        return b ** exponent
    e = as_interval(exponent, b.prec)
    if b.lo == fone and b.hi == fone:
        return Interval(fone, fone, max(b.prec, e.prec))
    return (e * b.log()).exp()


def interval_min(x: Interval, y: Interval) -> Interval:
    """Enclosure of ``min(s, t)`` for ``s`` in ``x`` and ``t`` in ``y``."""
    lo = x.lo if mpf_lt(x.lo, y.lo) else y.lo
    hi = x.hi if mpf_lt(x.hi, y.hi) else y.hi
    return Interval(lo, hi, max(x.prec, y.prec))


def interval_max(x: Interval, y: Interval) -> Interval:
    """Enclosure of ``max(s, t)`` for ``s`` in ``x`` and ``t`` in ``y``."""
    lo = y.lo if mpf_lt(x.lo, y.lo) else x.lo
    hi = y.hi if mpf_lt(x.hi, y.hi) else x.hi
    return Interval(lo, hi, max(x.prec, y.prec))
