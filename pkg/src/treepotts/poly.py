"""Dense univariate polynomials with exact rational coefficients.

Also home of the positivity prover used by the inequality engine: a
polynomial is shown positive on the open ray ``b > 1`` either from the signs
of its Taylor coefficients at ``b = 1`` or by a derivative cascade.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

SHIFT_NONNEG = "shift-nonneg"
DERIVATIVE_CASCADE = "derivative-cascade"


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


class RationalPoly:
    """Polynomial ``sum(coeffs[i] * b**i)``; the zero polynomial has no coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "RationalPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def constant(cls, c) -> "RationalPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots, lead=1) -> "RationalPoly":
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-_frac(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- ring operations ----------------------------------------------
    def _lift(self, other) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        return RationalPoly.constant(other)

    @staticmethod
    def _foreign(other) -> bool:
        return not isinstance(other, (RationalPoly, int, Rational))

    def __add__(self, other):
        if self._foreign(other):
            return NotImplemented
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        if self._foreign(other):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if self._foreign(other):
            return NotImplemented
        if not isinstance(other, RationalPoly):
            c = _frac(other)
            return RationalPoly(c * a for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _frac(c)
        return RationalPoly(a / c for a in self.coeffs)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = RationalPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.leading()
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + other.degree] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return RationalPoly(quot), RationalPoly(rem)

    def exact_div(self, other: "RationalPoly") -> "RationalPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divide_by_power_of_b(self, m: int) -> "RationalPoly":
        """``self / b**m``; raises unless the low ``m`` coefficients vanish."""
        if any(self.coeffs[:m]):
            raise ArithmeticError(f"polynomial is not divisible by b^{m}")
        return RationalPoly(self.coeffs[m:])

    def low_order(self) -> int:
        """Largest ``m`` with ``b**m`` dividing self (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    # -- calculus / evaluation ----------------------------------------
    def derivative(self, times: int = 1) -> "RationalPoly":
        p = self
        for _ in range(times):
            p = RationalPoly(i * c for i, c in enumerate(p.coeffs) if i)
        return p

    def shift_to_one(self) -> "RationalPoly":
        """Return ``q`` with ``q(t) = p(t + 1)``: the expansion in powers of ``b - 1``."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += c[j + 1]
        return RationalPoly(c)

    def compose_shift(self, s) -> "RationalPoly":
        """``p(t + s)`` for rational ``s``."""
        out = RationalPoly()
        lin = RationalPoly((s, 1))
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc if self.coeffs else Fraction(0)

    # -- identity -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs == RationalPoly.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def canonical(self) -> str:
        return ",".join(f"{c.numerator}/{c.denominator}" for c in self.coeffs)

    def digest(self) -> str:
        """Short stable fingerprint used in proof records."""
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]

    def __repr__(self):
        if not self.coeffs:
            return "RationalPoly(0)"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*b^{i}")
        return "RationalPoly(" + " + ".join(terms) + ")"


@dataclass(frozen=True)
class PositivityVerdict:
    """Outcome of :func:`certify_positive_on_open_ray`.

    ``method`` is set only when ``proven``; ``steps`` logs the cascade levels
    as ``(stripped power of b, value at 1, leaf method or None)``.
    """

    proven: bool
    method: str | None = None
    steps: tuple = field(default=(), compare=False)

    @property
    def status(self) -> str:
        return "proven" if self.proven else "unknown"


def _shift_nonneg(p: RationalPoly) -> bool:
    cs = p.shift_to_one().coeffs
    return bool(cs) and all(c >= 0 for c in cs) and any(c > 0 for c in cs)


def _cascade(p: RationalPoly, steps: list) -> bool:
    # p > 0 on (1, inf) if p = b^m q with q(1) >= 0 and q' > 0 there.
    m = p.low_order()
    q = p.divide_by_power_of_b(m)
    if q.degree == 0:
        steps.append((m, q.coeffs[0], "constant"))
        return q.coeffs[0] > 0
    if _shift_nonneg(q):
        steps.append((m, q(1), SHIFT_NONNEG))
        return True
    v = q(1)
    steps.append((m, v, None))
    if v < 0:
        return False
    return _cascade(q.derivative(), steps)


def certify_positive_on_open_ray(p: RationalPoly, method: str | None = None) -> PositivityVerdict:
    """Try to prove ``p(b) > 0`` for every real ``b > 1``.

    ``method`` selects one strategy; by default the Taylor-coefficient test is
    tried first and the derivative cascade second.  A negative answer is always
    reported as *unknown*, never as a disproof.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial is not positive anywhere")
    if method not in (None, SHIFT_NONNEG, DERIVATIVE_CASCADE):
        raise ValueError(f"unknown positivity method {method!r}")
    if method in (None, SHIFT_NONNEG) and _shift_nonneg(p):
        return PositivityVerdict(True, SHIFT_NONNEG)
    if method in (None, DERIVATIVE_CASCADE):
        steps: list = []
        if _cascade(p, steps):
            return PositivityVerdict(True, DERIVATIVE_CASCADE, tuple(steps))
        return PositivityVerdict(False, None, tuple(steps))
    return PositivityVerdict(False)


class ExponentPoly:
    """Polynomial in ``b`` whose exponents are affine in a symbolic integer ``d``.

    Stored as ``{(i, j): c(d)}`` meaning ``sum c(d) * b**(i*d + j)``, with each
    coefficient a :class:`RationalPoly` in ``d``.  Distinct keys are distinct
    monomials for every ``d`` large enough that no two ``i*d + j`` collide,
    which is the regime the tables describe.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            c = c if isinstance(c, RationalPoly) else RationalPoly.constant(c)
            if not c.is_zero():
                clean[key] = c
        self.terms: dict[tuple[int, int], RationalPoly] = clean

    @classmethod
    def monomial(cls, i: int, j: int, coeff=1) -> "ExponentPoly":
        return cls({(i, j): coeff})

    @classmethod
    def constant(cls, c) -> "ExponentPoly":
        return cls({(0, 0): c})

    def _lift(self, other) -> "ExponentPoly":
        return other if isinstance(other, ExponentPoly) else ExponentPoly.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out[key] + c if key in out else c
        return ExponentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ExponentPoly({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExponentPoly):
            return ExponentPoly({key: c * other for key, c in self.terms.items()})
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                prod = c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return ExponentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ExponentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self, times: int = 1) -> "ExponentPoly":
        p = self
        dvar = RationalPoly.x()
        for _ in range(times):
            p = ExponentPoly({(i, j - 1): c * (dvar * i + j) for (i, j), c in p.terms.items()})
        return p

    def shift_exponent(self, di: int, dj: int) -> "ExponentPoly":
        """Multiply by ``b**(di*d + dj)``."""
        return ExponentPoly({(i + di, j + dj): c for (i, j), c in self.terms.items()})

    def divide_coefficients(self, divisor: RationalPoly) -> "ExponentPoly":
        return ExponentPoly({key: c.exact_div(divisor) for key, c in self.terms.items()})

    def at_one(self) -> RationalPoly:
        """Value at ``b = 1`` as a polynomial in ``d``."""
        out = RationalPoly()
        for c in self.terms.values():
            out = out + c
        return out

    def instantiate(self, d: int) -> RationalPoly:
        """Concrete polynomial in ``b`` for an integer ``d`` (negative exponents rejected)."""
        coeffs: dict[int, Fraction] = {}
        for (i, j), c in self.terms.items():
            e = i * d + j
            if e < 0:
                raise ValueError(f"negative exponent b^{e} at d={d}")
            coeffs[e] = coeffs.get(e, Fraction(0)) + c(d)
        if not coeffs:
            return RationalPoly()
        return RationalPoly(coeffs.get(e, 0) for e in range(max(coeffs) + 1))

    def keys(self):
        return sorted(self.terms)

    def __getitem__(self, key) -> RationalPoly:
        return self.terms.get(key, RationalPoly())

    def __eq__(self, other):
        if not isinstance(other, ExponentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        return f"ExponentPoly({dict(sorted(self.terms.items()))})"
