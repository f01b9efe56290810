"""Acceptance criteria, one test per criterion.

A PASS/FAIL line per criterion is printed at the end of the pytest run
(see ``conftest.py``).
"""

import math
import time
from fractions import Fraction

import numpy as np

from symtest.distributions import get_family, sample_location
from symtest.efficiency import (
    equivalence_check_k3,
    integral_prefactor,
    integral_slope_coefficient,
    kolmogorov_slope_coefficient,
    kolmogorov_sup,
    projection_integral,
    sigma2_exact,
    slope_report,
    variance_function_max,
)
from symtest.nulldist import derived_seed, run_test, simulate_null
from symtest.stats import brute_force_statistic, compute_D, compute_I, compute_statistic


def _summary(record_property, text):
    record_property("acceptance", text)


def test_criterion_1_exact_variances(record_property):
    expected = {2: Fraction(1, 45), 3: Fraction(9, 320), 4: Fraction(2843, 126000),
                5: Fraction(2335, 145152), 6: Fraction(421691, 37669632)}
    start = time.perf_counter()
    got = {k: sigma2_exact(k) for k in expected}
    elapsed = time.perf_counter() - start
    _summary(record_property, f"sigma2 rationals {', '.join(str(v) for v in got.values())}; "
                              f"{elapsed:.3f}s")
    assert got == expected
    assert elapsed < 1.0


EFFICIENCY_REF = {
    ("integral", 2): {"logistic": 0.938, "normal": 0.977, "cauchy": 0.488},
    ("integral", 4): {"logistic": 0.925, "normal": 0.975, "cauchy": 0.332},
    ("kolmogorov", 2): {"logistic": 0.750, "normal": 0.764, "cauchy": 0.376},
    ("kolmogorov", 4): {"logistic": 0.696, "normal": 0.733, "cauchy": 0.313},
}


def test_criterion_2_efficiency_grid(record_property):
    start = time.perf_counter()
    bad = []
    for (kind, k), row in EFFICIENCY_REF.items():
        for fam, target in row.items():
            eff = slope_report(kind, k, fam).efficiency
            if abs(eff - target) > 0.005:
                bad.append(f"{kind} k={k} {fam}: {eff:.4f} vs {target}")
    elapsed = time.perf_counter() - start
    _summary(record_property, f"{12 - len(bad)}/12 cells within 0.005; {elapsed:.2f}s"
             + (f"; off: {'; '.join(bad)}" if bad else ""))
    assert elapsed < 10
    assert not bad, "; ".join(bad)


def test_criterion_3_reference_constants(record_property):
    checks = {}
    checks["prefactor k=2 == 320"] = integral_prefactor(2) == 320
    checks["prefactor k=4 == 1290240/2843"] = integral_prefactor(4) == Fraction(1290240, 2843)
    xi4 = variance_function_max(4)[1]
    checks[f"xi_4 max {xi4:.5f} ~ 0.1123"] = abs(xi4 - 0.1123) <= 1e-4
    pref = kolmogorov_slope_coefficient(4, "logistic").details["prefactor"]
    checks[f"D k=4 prefactor {pref:.4f} ~ 35.622"] = abs(pref - 35.622) <= 0.01
    j = projection_integral(4, "logistic")
    checks["logistic k=4 integral == 5/192"] = abs(j - 5 / 192) <= 1e-9
    c = integral_slope_coefficient(4, "logistic").slope_coefficient
    checks[f"logistic I k=4 slope {c:.4f} ~ 0.308"] = abs(c - 0.308) <= 0.002
    s2 = kolmogorov_sup(4, "normal")[0] ** 2
    checks[f"normal D k=4 sup^2 {s2:.5f} ~ 0.0206"] = abs(s2 - 0.0206) <= 2e-4
    failed = [name for name, ok in checks.items() if not ok]
    _summary(record_property, f"{len(checks) - len(failed)}/{len(checks)} constants")
    assert not failed, failed


def test_criterion_4_k3_equivalence(record_property):
    report = equivalence_check_k3(rtol=1e-8)
    worst = max(r["rel_diff"] for r in report["rows"])
    _summary(record_property, f"max relative difference k=3 vs k=2: {worst:.2e}")
    assert report["passed"]
    assert len(report["rows"]) == 6


def test_criterion_5_oracle_equivalence(record_property):
    rng = np.random.default_rng(20240605)
    families = ["normal", "logistic", "cauchy"]
    start = time.perf_counter()
    compared = 0
    for i in range(500):
        k = int(rng.choice([2, 3, 4]))
        n = int(rng.integers(k + 1, 13))
        x = get_family(families[i % 3]).sampler(rng, n)
        for kind in ("integral", "kolmogorov"):
            for variant in ("U", "V"):
                fast = compute_statistic(x, kind, k, variant).value
                slow = brute_force_statistic(x, kind, k, variant).value
                assert fast == slow, (kind, k, variant, x.tolist())
                compared += 1
    elapsed = time.perf_counter() - start
    _summary(record_property, f"{compared} fast/brute-force comparisons identical; {elapsed:.1f}s")
    assert elapsed < 60


def test_criterion_6_null_variance(record_property):
    start = time.perf_counter()
    table = simulate_null("integral", 2, "U", 200, 10_000, master_seed=6)
    elapsed = time.perf_counter() - start
    z = math.sqrt(200) * table.replicates
    mean, var = z.mean(), z.var(ddof=1)
    se = z.std(ddof=1) / math.sqrt(z.size)
    _summary(record_property, f"var(sqrt(n) I) = {var:.4f}, mean = {mean:.4f} (3 SE = {3 * se:.4f}); "
                              f"{elapsed:.1f}s")
    assert 0.18 <= var <= 0.22
    assert abs(mean) < 3 * se
    assert elapsed < 120


def _midcdf(sorted_vals, q):
    lo = np.searchsorted(sorted_vals, q, side="left")
    hi = np.searchsorted(sorted_vals, q, side="right")
    return (lo + 0.5 * (hi - lo)) / sorted_vals.size


def test_criterion_7_distribution_free(record_property):
    rng = np.random.default_rng(7)
    maps = {"cube": lambda v: v**3, "sinh": np.sinh, "x|x|": lambda v: v * np.abs(v)}
    checked = 0
    for i in range(200):
        k = int(rng.choice([2, 3, 4]))
        n = int(rng.integers(k + 1, 40))
        x = get_family(["normal", "logistic", "cauchy", "uniform"][i % 4]).sampler(rng, n)
        x = x / np.max(np.abs(x)) * 3  # keep sinh and cubes finite and distinct
        for g in maps.values():
            y = g(x)
            assert compute_I(y, k).value == compute_I(x, k).value
            assert compute_D(y, k).value == compute_D(x, k).value
            checked += 1

    reps, n = 5000, 30
    probs = (0.8, 0.9, 0.95, 0.99, 0.999)
    worst = 0.0
    for kind in ("integral", "kolmogorov"):
        base = simulate_null(kind, 2, "U", n, reps, master_seed=701, family="uniform")
        for seed, fam in ((702, "normal"), (703, "logistic")):
            other = simulate_null(kind, 2, "U", n, reps, master_seed=seed, family=fam)
            for p, q in zip(probs, base.quantiles(probs)):
                diff = abs(_midcdf(base.replicates, q) - _midcdf(other.replicates, q))
                se = math.sqrt(2 * p * (1 - p) / reps)
                worst = max(worst, diff / se)
    _summary(record_property, f"{checked} invariance checks exact; worst quantile gap {worst:.2f} SE")
    assert worst <= 3


def test_criterion_8_size(record_property):
    trials, n = 2000, 100
    alphas = (0.01, 0.05, 0.10)
    lines, ok = [], True
    for kind in ("integral", "kolmogorov"):
        table = simulate_null(kind, 2, "U", n, 10_000, master_seed=808)
        ps = np.array([
            run_test(sample_location("uniform", 0.0, n, seed=derived_seed(809, j, stream=2)),
                     kind, 2, "U", 0.05, table).p_value
            for j in range(trials)
        ])
        for a in alphas:
            rate = np.mean(ps <= a)
            se = math.sqrt(a * (1 - a) / trials)
            good = abs(rate - a) <= 3 * se
            ok &= good
            lines.append(f"{'I' if kind == 'integral' else 'D'} a={a}: {rate:.4f}")
    _summary(record_property, ", ".join(lines))
    assert ok, lines
