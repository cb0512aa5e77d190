"""One test per acceptance criterion, each at its stated tolerance."""

from __future__ import annotations

import random
import time
from fractions import Fraction

from treepotts.bruteforce import recursion_matches_oracle
from treepotts.certify import (
    build_reduction_polys,
    certify_uniqueness,
    critical_activity,
    regenerate_tables,
    verify_inequality,
)
from treepotts.maps import PottsParams, all_permutations, iterate_F, map_F, perm_act, preset_point
from treepotts.poly import RationalPoly, certify_positive_on_open_ray
from treepotts.regions import RegionParams, verify_log_convexity

B = RationalPoly.x()


def test_criterion_1_recursion_equals_oracle(report_criterion):
    start = time.perf_counter()
    failures = []
    configs = 0
    for k in (3, 4):
        for d in (2, 3):
            params = PottsParams(k, d, Fraction(2, 7))
            for n in (1, 2):
                for hat in (True, False):
                    ok, count, bad = recursion_matches_oracle(n, params, hat)
                    configs += 1
                    if not ok or count != k ** (d ** n):
                        failures.append((k, d, n, hat, bad))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    report_criterion(1, ok, f"{configs} configurations, {len(failures)} mismatches, {elapsed:.1f}s")
    assert not failures, failures
    assert elapsed < 120


def test_criterion_2_table_fidelity(report_criterion):
    start = time.perf_counter()
    reports = [regenerate_tables(k, d_values=range(4, 13)) for k in (3, 4)]
    elapsed = time.perf_counter() - start
    mismatches = [m for r in reports for m in r.mismatches]
    checked = sum(r.checked for r in reports)
    ok = not mismatches and elapsed < 60
    report_criterion(2, ok, f"{checked} entries, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert not mismatches, [str(m) for m in mismatches[:5]]
    assert elapsed < 60


def test_criterion_3_closed_forms(report_criterion):
    t = B - 1
    p0_d2 = 54 * t**6 + 54 * t**5
    p0_d3 = (16 * t**12 + 212 * t**11 + 1236 * t**10 + 4116 * t**9 + 8793 * t**8 + 12789 * t**7
             + 12123 * t**6 + 6318 * t**5 + 1458 * t**4)
    ok_p0 = build_reduction_polys(3, 2).P0 == p0_d2 and build_reduction_polys(3, 3).P0 == p0_d3
    bad_r = [(k, d) for k in (3, 4) for d in range(2, 13)
             if build_reduction_polys(k, d).r != RationalPoly.monomial(d - 1, k * k * d * d)]
    ok = ok_p0 and not bad_r
    report_criterion(3, ok, f"P0 closed forms {'match' if ok_p0 else 'differ'}, r identity failures {bad_r}")
    assert ok_p0
    assert not bad_r


def test_criterion_4_inequality_engine(report_criterion):
    cases = [(3, d) for d in range(2, 13)] + [(4, d) for d in range(4, 13)]
    failures = []
    slowest = 0.0
    for k, d in cases:
        start = time.perf_counter()
        for which in (1, 2, 3, 4):
            rec = verify_inequality(which, k, d, critical_activity(k, d))
            if not rec.proven:
                failures.append((k, d, which))
        slowest = max(slowest, time.perf_counter() - start)
    ok = not failures and slowest < 60
    report_criterion(4, ok, f"{len(cases)} (k,d) pairs, failures {failures}, slowest pair {slowest:.2f}s")
    assert not failures
    assert slowest < 60


def test_criterion_5_end_to_end_certification(report_criterion):
    cases = [(3, 2, Fraction(1, 2)), (3, 3, Fraction(1, 4)), (4, 4, Fraction(1, 5)), (4, 5, Fraction(1, 3))]
    results = []
    for k, d, w in cases:
        start = time.perf_counter()
        cert = certify_uniqueness(k, d, w)
        elapsed = time.perf_counter() - start
        bs = cert.b_values
        decreasing = all(x > y for x, y in zip(bs, bs[1:]))
        final_gap = bs[-1] - 1 if bs else None
        good = (cert.certified and decreasing and final_gap is not None
                and final_gap < Fraction(1, 10**6) and elapsed < 300)
        results.append((k, d, w, good, cert.status.value, float(final_gap) if bs else None, elapsed))
    ok = all(r[3] for r in results)
    detail = "; ".join(f"(k={k},d={d},w={w}) {status} b_N-1={gap:.2e} {t:.0f}s"
                       for k, d, w, _, status, gap, t in results)
    report_criterion(5, ok, detail)
    assert ok, detail


def test_criterion_6_convergence_probe(report_criterion):
    presets = ["corner", "spike-1", "spike-2", "spike-3"]
    at = PottsParams(4, 4, Fraction(1, 5))
    below = PottsParams(4, 4, Fraction(1, 10))
    converged = {}
    for name in presets:
        tr = iterate_F(preset_point(name, at), at, max_steps=500, tol=Fraction(1, 10**9))
        converged[name] = min(tr.distances) < 1e-9
    stuck = {}
    for name in presets:
        tr = iterate_F(preset_point(name, below), below, max_steps=500, tol=Fraction(1, 10**6))
        stuck[name] = min(tr.distances) >= 1e-6
    ok = all(converged.values()) and all(stuck.values())
    report_criterion(6, ok, f"at w=1/5 converged {converged}; at w=1/10 stays away {stuck}")
    assert all(converged.values()), converged
    assert all(stuck.values()), stuck


def _random_point(rng: random.Random, k: int):
    return tuple(Fraction(rng.randint(1, 60), rng.randint(1, 60)) for _ in range(k - 1))


def test_criterion_7_symmetry(report_criterion):
    rng = random.Random(20240607)
    checked = 0
    failures = []
    for k in (3, 4):
        params = PottsParams(k, 3, Fraction(1, 3))
        for sigma in all_permutations(k):
            for _ in range(200):
                x = _random_point(rng, k)
                if map_F(perm_act(sigma, x), params) != perm_act(sigma, map_F(x, params)):
                    failures.append((k, str(sigma), x))
                checked += 1
    report_criterion(7, not failures, f"{checked} exact equalities, {len(failures)} failures")
    assert not failures


def _random_valid_region(rng: random.Random, k: int) -> RegionParams:
    b = 1 + Fraction(rng.randint(1, 300), 100)
    lo = b if k == 4 else max(Fraction(1) + Fraction(1, 100), Fraction(int(float(b) ** 0.5 * 1000) + 1, 1000))
    hi = b * b
    a = lo + (hi - lo) * Fraction(rng.randint(0, 1000), 1000)
    region = RegionParams(a, b, k)
    assert region.valid
    return region


def test_criterion_8_dual_representation(report_criterion):
    rng = random.Random(8)
    failures = []
    decided = 0
    for k in (3, 4):
        for i in range(20):
            region = _random_valid_region(rng, k)
            rep = verify_log_convexity(region, samples=10_000, seed=i)
            decided += rep.decided_both
            if not rep.ok:
                failures.append((k, region.a, region.b, rep.first_disagreement, rep.vertex_failure))
    report_criterion(8, not failures, f"40 regions, {decided} decided samples, {len(failures)} failures")
    assert not failures, failures[:3]


def test_criterion_9_prover_soundness(report_criterion):
    rng = random.Random(9)
    proven = []
    for _ in range(100):
        r = 1 + Fraction(rng.randint(1, 400), rng.randint(1, 100))
        cs = [rng.randint(0, 30) for _ in range(rng.randint(1, 6))]
        cs[-1] = cs[-1] or 1
        s = RationalPoly(cs).compose_shift(-1)  # nonnegative Taylor coefficients at 1
        p = (B - r) * s * rng.choice((1, -1))
        if certify_positive_on_open_ray(p).proven:
            proven.append((r, cs))
    report_criterion(9, not proven, f"100 polynomials with a root above 1, {len(proven)} wrongly proven")
    assert not proven
