from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
import sympy as sp

from treepotts.certify import (
    CertStatus,
    IneqFunctions,
    L_U_M,
    SequenceOptions,
    UnsupportedParameters,
    build_reduction_polys,
    build_shrinking_sequence,
    certify_uniqueness,
    critical_activity,
    reconstruct_p0,
    regenerate_tables,
    verify_inequality,
)
from treepotts.interval import Interval
from treepotts.poly import RationalPoly

B = RationalPoly.x()


def sympy_p0(k: int, d: int) -> RationalPoly:
    """Independent construction of P0 from l and h directly."""
    b = sp.Symbol("b")
    w = sp.Rational(d + 1 - k, d + 1)
    # numerators and denominators of l and h, cleared of the 1/(d+1) in w
    p = sp.expand((d + 1) * (b**d + k - 2 + w))
    q = sp.expand((d + 1) * (w * b**d + k - 1))
    s = sp.expand((d + 1) * b**d * (b - 1) * (k - 1 + w))
    t = sp.expand((d + 1) * (b**d - 1) * (b - w))
    r = sp.expand(q * sp.diff(p, b) - p * sp.diff(q, b))
    v = sp.expand(t * sp.diff(s, b) - s * sp.diff(t, b))
    P = sp.expand((b + 1) * s * p * q * t + 2 * b * (b - 1) * v * p * q - b * (b + 1) * r * t**2)
    P0 = sp.Poly(sp.cancel(P / (k * d * b**d)), b)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(P0.all_coeffs())]
    return RationalPoly(coeffs)


@pytest.mark.parametrize("k,d", [(3, 2), (3, 5), (4, 4), (4, 6)])
def test_p0_matches_independent_construction(k, d):
    assert build_reduction_polys(k, d).P0 == sympy_p0(k, d)


def test_closed_forms_small_d():
    polys = build_reduction_polys(3, 2)
    assert polys.P0 == 54 * (B - 1) ** 6 + 54 * (B - 1) ** 5
    assert polys.Q == 3 * B**2 - 3
    assert build_reduction_polys(3, 5).r == 225 * B**4


def test_only_critical_reduction_supported():
    with pytest.raises(ValueError):
        build_reduction_polys(3, 3, at_wc=False)


def test_q_derivatives_at_one():
    for k in (3, 4):
        for d in range(4, 9):
            Q = build_reduction_polys(k, d).Q
            assert Q(1) == 0
            assert Q.derivative()(1) == k * d
            assert Q.derivative(2)(1) == d * (d + 1) * (4 - k)


@pytest.mark.parametrize("which", [1, 2, 3, 4])
def test_inequalities_proven_at_threshold(which):
    for k, d in ((3, 2), (3, 7), (4, 4), (4, 9)):
        rec = verify_inequality(which, k, d, critical_activity(k, d))
        assert rec.proven, rec
        assert all(e.status == "proven" for e in rec.evidence)


def test_inequality_one_small_case_uses_taylor_signs():
    rec = verify_inequality(1, 3, 2, Fraction(0))
    assert rec.method == "shift-nonneg"
    assert rec.evidence[0].digest == build_reduction_polys(3, 2).P0.digest()


def test_inequality_support_range():
    with pytest.raises(UnsupportedParameters):
        verify_inequality(3, 4, 3, Fraction(1, 2))
    assert verify_inequality(4, 4, 3, Fraction(1, 2)).proven
    with pytest.raises(UnsupportedParameters):
        verify_inequality(1, 3, 3, Fraction(1, 8))
    with pytest.raises(UnsupportedParameters):
        verify_inequality(5, 3, 3, Fraction(1, 2))


def test_removable_value_of_h():
    fns = IneqFunctions(4, 5, Fraction(1, 3))
    assert fns.h(Fraction(1)) == Fraction(3 + Fraction(1, 3)) / (5 * Fraction(2, 3))
    assert IneqFunctions(4, 5, critical_activity(4, 5)).h(Fraction(1)) == 1
    near = fns.h(Fraction(1) + Fraction(1, 10**9))
    assert abs(near - fns.h(Fraction(1))) < Fraction(1, 10**6)


def test_monotonicity_in_w():
    # l decreases and u increases in w; g decreases in w as well, which is the
    # direction the reduction for g < b actually needs
    rng = random.Random(7)
    for _ in range(50):
        k = rng.choice((3, 4))
        d = rng.randint(4, 9)
        wc = critical_activity(k, d)
        b = 1 + Fraction(rng.randint(1, 4000), 1000)
        w1 = wc + (1 - wc) * Fraction(rng.randint(0, 900), 1000)
        w2 = w1 + (1 - w1) * Fraction(rng.randint(1, 900), 1000)
        f1, f2 = IneqFunctions(k, d, w1), IneqFunctions(k, d, w2)
        assert f2.l(b) <= f1.l(b)
        assert f2.u(b).certainly_ge(f1.u(b))
        assert f2.g(b) <= f1.g(b)


def test_h_increasing():
    rng = random.Random(3)
    for _ in range(100):
        k = rng.choice((3, 4))
        d = rng.randint(2, 12)
        fns = IneqFunctions(k, d, critical_activity(k, d))
        b1 = 1 + Fraction(rng.randint(1, 5000), 1000)
        b2 = b1 + Fraction(rng.randint(1, 5000), 1000)
        assert fns.h(b1) < fns.h(b2)


def test_lum_ordering_and_limit():
    L, U, M = L_U_M(Fraction(6, 5), 3, 3, Fraction(1, 4))
    assert U.certainly_gt(M) and M.certainly_gt(L)
    near = L_U_M(1 + Fraction(1, 10**8), 3, 3, Fraction(1, 4))
    assert near.U.hi_fraction() - 1 < Fraction(1, 10**6)
    assert isinstance(near.M, Interval)
    with pytest.raises(ValueError):
        L_U_M(Fraction(1), 3, 3, Fraction(1, 4))


def test_table_examples():
    assert regenerate_tables(3, d_values=[7]).ok
    from treepotts._table_data import CASCADE_VALUES, COMMON_FACTOR, P0_COEFFS

    assert P0_COEFFS[3][(3, 3)](7) == 320
    assert CASCADE_VALUES[4][(1, 0)](0) == 0
    assert CASCADE_VALUES[3][(3, 3)](0) == 36 * 2 * 5**4 * 6 * 7 * 9 * 11 * 13 * 14
    p1 = build_reduction_polys(4, 4).P0.derivative(4)
    assert p1(1) == 0
    assert COMMON_FACTOR[3](0) == 6 * 64 * 5


@pytest.mark.parametrize("k", [3, 4])
def test_symbolic_tables(k):
    report = regenerate_tables(k, d_symbolic=True)
    assert report.ok, report.mismatches
    assert report.checked == 32


def test_tampered_table_is_located():
    report = regenerate_tables(4, d_values=[5], tamper=True)
    assert not report.ok
    (m,) = report.mismatches
    assert m.row == "b^{3d+3}" and m.column == "d=5"
    assert m.expected == m.got + 1


@pytest.mark.parametrize("k", [3, 4])
def test_p0_reconstructed_from_table(k):
    for d in range(4, 13):
        assert reconstruct_p0(k, d) == build_reduction_polys(k, d).P0


def test_sequence_above_threshold_certifies():
    cert = build_shrinking_sequence(3, 2, Fraction(1, 2))
    assert cert.status is CertStatus.CERTIFIED
    bs = cert.b_values
    assert all(x > y for x, y in zip(bs, bs[1:]))
    assert bs[-1] - 1 < Fraction(1, 10**6)
    assert 0 < cert.distance_bound < Fraction(1, 10**5)
    assert all(s.containment == "certified" for s in cert.sequence[1:])


def test_sequence_below_threshold_fails():
    cert = build_shrinking_sequence(4, 4, Fraction(1, 10))
    assert cert.status is CertStatus.FAILED
    assert cert.failed_step is not None and cert.failed_step > 0


def test_certificate_json_layout_and_determinism():
    opts = SequenceOptions()
    a = certify_uniqueness(3, 2, Fraction(1, 2), opts)
    b = certify_uniqueness(3, 2, Fraction(1, 2), opts)
    assert a.to_json() == b.to_json()
    doc = json.loads(a.to_json())
    assert list(doc)[:3] == ["params", "inequalities", "b0"]
    assert doc["params"] == {"k": 3, "d": 2, "w": "1/2"}
    assert [i["id"] for i in doc["inequalities"]] == [1, 2, 3, 4]
    assert doc["status"] == "certified"
    assert all(entry["ok"] for entry in doc["audit"])
    assert doc["precision_bits"] == 128
    num, den = doc["distance_bound"].split("/")
    assert int(den) > 0 and int(num) > 0


def test_certify_rejects_unsupported():
    with pytest.raises(UnsupportedParameters):
        certify_uniqueness(4, 3, Fraction(1, 2))
    with pytest.raises(UnsupportedParameters):
        certify_uniqueness(3, 2, Fraction(0))
    with pytest.raises(UnsupportedParameters):
        certify_uniqueness(4, 4, Fraction(1, 10))
