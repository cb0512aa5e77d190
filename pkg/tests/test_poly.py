from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from treepotts.poly import (
    DERIVATIVE_CASCADE,
    SHIFT_NONNEG,
    ExponentPoly,
    RationalPoly,
    certify_positive_on_open_ray,
)

B = RationalPoly.x()
coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=8)


def to_sympy(p: RationalPoly):
    b = sp.Symbol("b")
    return sum(sp.Rational(c.numerator, c.denominator) * b**i for i, c in enumerate(p.coeffs)), b


@given(coeff_lists, coeff_lists)
def test_ring_operations_match_sympy(xs, ys):
    p, q = RationalPoly(xs), RationalPoly(ys)
    sp_p, b = to_sympy(p)
    sp_q, _ = to_sympy(q)
    assert sp.expand(to_sympy(p * q)[0] - sp_p * sp_q) == 0
    assert sp.expand(to_sympy(p - q)[0] - (sp_p - sp_q)) == 0
    assert sp.expand(to_sympy(p.derivative(2))[0] - sp.diff(sp_p, b, 2)) == 0


@given(coeff_lists)
def test_shift_to_one_is_taylor_expansion(xs):
    p = RationalPoly(xs)
    shifted = p.shift_to_one()
    for t in (Fraction(0), Fraction(1, 3), Fraction(5)):
        assert shifted(t) == p(t + 1)


@given(coeff_lists, st.lists(st.integers(-5, 5), min_size=1, max_size=4).filter(lambda c: c[-1] != 0))
def test_divmod_reconstructs(xs, ys):
    p, q = RationalPoly(xs), RationalPoly(ys)
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.degree < q.degree or rem.is_zero()


def test_exact_division_errors():
    with pytest.raises(ArithmeticError):
        (B + 1).exact_div(B - 1)
    with pytest.raises(ArithmeticError):
        (B + 1).divide_by_power_of_b(1)


def test_positive_examples():
    assert certify_positive_on_open_ray(54 * (B - 1) ** 6 + 54 * (B - 1) ** 5).method == SHIFT_NONNEG
    p = B**4 - 2 * B**2 + 1 + (B - 1)
    verdict = certify_positive_on_open_ray(p, method=DERIVATIVE_CASCADE)
    assert verdict.proven


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        certify_positive_on_open_ray(RationalPoly())


@given(
    st.fractions(min_value=Fraction(51, 50), max_value=Fraction(20), max_denominator=50),
    st.lists(st.integers(0, 9), min_size=1, max_size=5).filter(any),
    st.booleans(),
)
def test_never_proves_polynomial_with_root_above_one(r, cs, negate):
    s = RationalPoly(cs).compose_shift(-1)  # nonnegative in powers of b-1, so positive on b > 1
    p = (B - r) * s
    if negate:
        p = -p
    assert not certify_positive_on_open_ray(p).proven


def test_digest_is_stable():
    assert (B**2 - 1).digest() == RationalPoly((-1, 0, 1)).digest()
    assert (B**2 - 1).digest() != (B**2 + 1).digest()
    assert len(B.digest()) == 16


def test_exponent_poly_instantiates_like_concrete_arithmetic():
    D = RationalPoly.x()
    bd = ExponentPoly.monomial(1, 0)
    b = ExponentPoly.monomial(0, 1)
    p = ((D + 1) * bd + 3) * (b - 1)
    for d in (2, 5, 9):
        concrete = ((d + 1) * B**d + 3) * (B - 1)
        assert p.instantiate(d) == concrete
        assert p.derivative(2).instantiate(d) == concrete.derivative(2)
        assert p.at_one()(d) == concrete(1)
