"""Acceptance suite: one test per criterion, each with its tolerance and time budget.

Every test records a one-line PASS/FAIL verdict; the lines are printed in the
pytest terminal summary (and directly when this file is run as a script).
"""

import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from jacksonine import jack
from jacksonine import partitions as pt
from jacksonine.cones import (
    ConeField,
    spectral_identity,
    verify_chamber_sonine,
    verify_group_integral,
    verify_limit_corollary,
)
from jacksonine.hyper import MultiplicityB
from jacksonine.laguerre import LaguerreParams, connection_coefficients, laguerre_bessel_limit_error, wallach_sign_scan
from jacksonine.sonine import (
    MethodMismatch,
    SonineParams,
    b_to_a_residual,
    classical_sonine,
    second_moment_check,
    selberg_constant,
    verify_discrete_sonine,
    verify_restricted_sonine,
)

VERDICTS: list[str] = []
ALPHAS = (F(1, 2), F(1), F(2))


def halving(seq) -> bool:
    return all(seq[i] <= 0.5 * seq[i - 2] for i in range(2, len(seq)))


def record(number: int, title: str, passed: bool, detail: str, elapsed: float, budget: float) -> None:
    ok = passed and elapsed < budget
    VERDICTS.append(
        f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}: {detail} ({elapsed:.1f} s, budget {budget:.0f} s)"
    )
    assert passed, detail
    assert elapsed < budget, f"took {elapsed:.1f} s, budget {budget} s"


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_jack_normalization():
    def body():
        bad = []
        for n in (2, 3):
            for alpha in ALPHAS:
                for m in range(6):
                    total = jack.SymPoly(n)
                    for lam in pt.enumerate_partitions(m, n):
                        total = total + jack.jack_C(lam, alpha, n)
                    if total != jack.power_sum_one(n) ** m:
                        bad.append((n, alpha, m))
        return bad

    bad, dt = timed(body)
    record(1, "Jack normalization", not bad, f"{len(bad)} mismatching (n, alpha, m) shells", dt, 10)


def test_criterion_02_binomial_identities():
    def body():
        checked, bad = 0, []
        for n in (1, 2, 3):
            for kappa in pt.partitions_upto(6, n):
                for alpha in ALPHAS + (F(5, 3),):
                    row = jack.binomial_row(kappa, alpha)
                    size = sum(kappa)
                    sums_ok = all(
                        sum(v for lam, v in row.items() if sum(lam) == m) == math.comb(size, m) for m in range(size + 1)
                    )
                    if not sums_ok or any(v < 0 for v in row.values()):
                        bad.append((kappa, alpha))
                    checked += 1
        return checked, bad

    (checked, bad), dt = timed(body)
    record(2, "binomial nonnegativity and row sums", not bad, f"{checked} rows, {len(bad)} failures", dt, 30)


def test_criterion_03_connection_coefficients():
    def body():
        tables, bad = 0, []
        for n in (1, 2, 3):
            for alpha in ALPHAS:
                for a in (F(-1, 2), F(0), F(3, 2)):
                    p = LaguerreParams(n, a, alpha)
                    for kappa in pt.partitions_upto(6, n):
                        t = connection_coefficients(kappa, p, 1 / alpha)
                        tables += 1
                        if t.total() != 1 or t.negatives():
                            bad.append((n, alpha, a, kappa))
        worst = 0.0
        for a in (F(-1, 2), F(0), F(3, 2)):
            for k in range(7):
                t = connection_coefficients((k,), LaguerreParams(1, a, 1), 1)
                for (j,), c in t.entries.items():
                    ref = math.exp(
                        math.lgamma(j + a + 1) - math.lgamma(j + 1) - math.lgamma(a + 1)
                        - (math.lgamma(k + a + 2) - math.lgamma(k + 1) - math.lgamma(a + 2))
                    )
                    worst = max(worst, abs(float(c) - ref))
        return tables, bad, worst

    (tables, bad, worst), dt = timed(body)
    ok = not bad and worst < 1e-12
    record(3, "connection coefficients", ok, f"{tables} tables, {len(bad)} failures, rank-one max error {worst:.1e}", dt, 60)


def test_criterion_04_wallach_sign_scan():
    def body():
        p = LaguerreParams(2, F(0), F(1))
        witness = wallach_sign_scan(p, F(1, 2), 6)
        clean = [wallach_sign_scan(p, h, 6) for h in (F(1), F(2))]
        return witness, clean

    (witness, clean), dt = timed(body)
    ok = bool(witness.violations) and all(r.clean for r in clean)
    first = witness.violations[0] if witness.violations else None
    detail = f"h=1/2 first witness {first}, {len(witness.violations)} total; h in {{1, 2}} clean={[r.clean for r in clean]}"
    record(4, "Wallach sign scan", ok, detail, dt, 60)


def test_criterion_05_restricted_sonine():
    def body():
        sp = SonineParams(MultiplicityB(2, F(1, 2), F(1, 2)), 2)
        grid = [0.0, 0.5, 1.0]
        worst = max(verify_restricted_sonine(sp, [y1, y2], order=64).residual for y1 in grid for y2 in grid)
        worst1 = 0.0
        for k1, h, z in ((F(1, 2), F(1), 1.3), (F(1), F(5, 2), 2.0), (F(3, 2), F(1, 2), 0.7)):
            rep = verify_restricted_sonine(SonineParams(MultiplicityB(1, k1, 1), h), [z], order=64)
            lhs, rhs = classical_sonine(float(k1) - 0.5, float(h), z)
            worst1 = max(worst1, abs(rep.rhs - rhs), abs(rep.lhs - lhs), abs(lhs - rhs))
        return worst, worst1

    (worst, worst1), dt = timed(body)
    record(5, "restricted Sonine formula", worst < 1e-6 and worst1 < 1e-10, f"n=2 max residual {worst:.1e}, n=1 {worst1:.1e}", dt, 120)


def test_criterion_06_discrete_sonine():
    def body():
        k = MultiplicityB(2, 1, 1)
        return [verify_discrete_sonine([1.0, 0.5], [0.5, 0.2], k, j, 1).residual for j in (8, 64)]

    (r8, r64), dt = timed(body)
    record(6, "discrete Sonine convergence", r64 <= 0.5 * r8, f"residual j=8 {r8:.2e}, j=64 {r64:.2e}", dt, 120)


def test_criterion_07_selberg_constant():
    def body():
        worst, count, skipped = 0.0, 0, []
        for n in (1, 2, 3):
            for k1 in (F(0), F(1, 2), F(1)):
                for k2 in (F(1, 2), F(1)):
                    for h in sorted({k2 * (n - 1) + F(1, 2), F(2)}):
                        if not h > k2 * (n - 1):
                            skipped.append((n, k2, h))
                            continue
                        try:
                            c = selberg_constant(SonineParams(MultiplicityB(n, k1, k2), h, "density"), rtol=None)
                        except MethodMismatch:
                            return float("inf"), count, skipped
                        worst = max(worst, c.rel_diff)
                        count += 1
        return worst, count, skipped

    (worst, count, skipped), dt = timed(body)
    detail = f"{count} points, max relative difference {worst:.1e}, skipped h <= k2(n-1): {sorted(set(skipped))}"
    record(7, "Selberg constant cross-validation", worst < 1e-8, detail, dt, 60)


def test_criterion_08_limits():
    def body():
        k = MultiplicityB(2, 1, 1)
        lag = [laguerre_bessel_limit_error(k, [1.0, 0.5], [0.5, 0.2], j) for j in (8, 16, 32, 64, 128)]
        bta = [b_to_a_residual(k1, 1, [0.6, 0.2], [0.5, 0.1]) for k1 in (25, 100, 400)]
        return lag, bta

    (lag, bta), dt = timed(body)
    ok = halving(lag) and halving(bta)
    detail = "Laguerre " + " ".join(f"{v:.2e}" for v in lag) + "; B->A " + " ".join(f"{v:.2e}" for v in bta)
    record(8, "Laguerre->Bessel and B->A limits", ok, detail, dt, 120)


def test_criterion_09_second_moment():
    def body():
        k = MultiplicityB(2, 1, 1)
        return [second_moment_check([F(1, 2), F(1, 2)], k, j) for j in (4, 16, 64)]

    pairs, dt = timed(body)
    rel = max(abs(m - p) / p for m, p in pairs)
    record(9, "second-moment identity", rel < 1e-8, f"max relative difference {rel:.1e} at j in (4, 16, 64)", dt, 60)


def test_criterion_10_matrix_cones():
    def body():
        gap = 0.0
        rng = np.random.default_rng(0)
        for d in (1, 2):
            for n in (1, 2, 3):
                cf = ConeField(d, n)
                for _ in range(5):
                    x = np.sort(rng.uniform(0, 1.5, n))[::-1]
                    lhs, rhs = spectral_identity(float(cf.mu0) + 1.5, x, cf)
                    gap = max(gap, abs(lhs - rhs))
        reports = {}
        for d in (1, 2):
            cf = ConeField(d, 2)
            reports[f"group d={d}"] = (verify_group_integral(cf, 0.5, [1.0, 0.4], [0.8, 0.3], 100_000, 0), 0.0)
            reports[f"chamber d={d}"] = (verify_chamber_sonine(cf, 0.5, 2, [1.0, 0.4], [0.8, 0.3], 100_000, 6, 0), 0.0)
            reports[f"limit d={d}"] = (verify_limit_corollary(cf, 1, [0.5, 0.3], [0.6, 0.4], 100_000, 8, 0), 1e-3)
        return gap, reports

    (gap, reports), dt = timed(body)
    ok = gap < 1e-10 and all(rep.within(3.0, floor) for rep, floor in reports.values())
    parts = [f"spectral gap {gap:.1e}"] + [
        f"{name} {rep.residual / rep.mc_stderr:.2f} SE" for name, (rep, _) in reports.items()
    ]
    record(10, "matrix-cone checks", ok, ", ".join(parts), dt, 300)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
