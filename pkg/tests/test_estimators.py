"""Rate extraction, stabilization, compacta supremum, and CSV output."""

import csv
import math

import numpy as np
import pytest

from entro import (
    CompactFamily,
    ConfigError,
    ExtrapolationRule,
    MetricSpec,
    PointCloud,
    WindowError,
    bd_count_table,
    compacta_estimate,
    entropy_estimate,
    growth_rate,
    inequality_report,
    write_estimate_csv,
)
from entro.gallery import build_doubling


class TestGrowthRate:
    def test_exact_exponential(self):
        counts = [3 * 2 ** n for n in range(1, 9)]
        assert math.isclose(growth_rate(counts, (1, 8)), math.log(2.0))

    def test_window_restricts_fit(self):
        # exponential inside the window, flat outside
        counts = [5, 10, 20, 40, 41, 41]
        assert math.isclose(growth_rate(counts, (1, 4)), math.log(2.0))

    def test_decaying_counts_fit_negative(self):
        counts = [100, 50, 25, 12]
        assert growth_rate(counts, (1, 4)) < 0.0

    def test_short_window_raises(self):
        with pytest.raises(WindowError):
            growth_rate([2, 4], (1, 5))

    def test_zero_count_raises(self):
        with pytest.raises(ConfigError):
            growth_rate([0, 4, 8], (1, 3))


def synthetic_table(counts_by_eps, cloud_size):
    """Build a CountTable directly from prescribed counts."""
    from entro.metric_core import CountRow, CountTable

    rows = []
    for eps, counts in counts_by_eps.items():
        for n, c in enumerate(counts, start=1):
            rows.append(CountRow(eps, n, c, max(1, c - 1), "greedy"))
    return CountTable(tuple(rows), cloud_size, None, ())


class TestEntropyEstimate:
    def test_stabilized_pair_sets_headline(self):
        # two smallest scales agree within the default 0.05 tolerance
        table = synthetic_table(
            {
                0.4: [4 * 2 ** n for n in range(8)],
                0.2: [5 * int(2.02 ** n) for n in range(8)],
                0.1: [6 * int(2.04 ** n) for n in range(8)],
            },
            cloud_size=100_000,
        )
        est = entropy_estimate(table)
        assert est.stable
        assert math.isclose(est.headline, est.per_eps[-1].rate)

    def test_unstable_reports_smallest_scale(self):
        table = synthetic_table(
            {
                0.4: [4 * 2 ** n for n in range(8)],
                0.2: [4 * int(2.5 ** n) for n in range(8)],
                0.1: [4 * 3 ** n for n in range(8)],
            },
            cloud_size=10 ** 9,
        )
        est = entropy_estimate(table)
        assert not est.stable
        assert math.isclose(est.headline, est.per_eps[-1].rate)
        assert any("unstable" in d for d in est.diagnostics)

    def test_saturated_counts_leave_window(self):
        flat = [10, 20, 40, 80, 95, 95, 95, 95]
        table = synthetic_table({0.4: flat, 0.2: flat, 0.1: flat}, cloud_size=100)
        est = entropy_estimate(table)
        lo, hi = est.per_eps[0].window
        assert hi <= 4  # 95 >= 0.9 * 100 is saturated
        assert math.isclose(est.per_eps[0].rate, math.log(2.0), rel_tol=1e-6)

    def test_headline_log2(self):
        counts = {eps: [2 ** n for n in range(1, 9)] for eps in (0.4, 0.2, 0.1)}
        est = entropy_estimate(synthetic_table(counts, 10 ** 9))
        assert math.isclose(est.headline_log2, est.headline / math.log(2.0))

    def test_custom_rule_tolerance(self):
        table = synthetic_table(
            {
                0.2: [4 * 2 ** n for n in range(8)],
                0.1: [4 * int(2.2 ** n) for n in range(8)],
                0.05: [4 * int(2.21 ** n) for n in range(8)],
            },
            cloud_size=10 ** 9,
        )
        tight = entropy_estimate(table, rule=ExtrapolationRule(0.001, 0.9, 4, "sep"))
        loose = entropy_estimate(table, rule=ExtrapolationRule(0.5, 0.9, 4, "sep"))
        assert not tight.stable
        assert loose.stable


class TestCompactFamily:
    def test_nesting_enforced(self, rng):
        a = PointCloud(rng.random((5, 2)), 0.1)
        b = PointCloud(rng.random((7, 2)) + 10.0, 0.1)
        with pytest.raises(ConfigError):
            CompactFamily((a, b))

    def test_prefix_subsets_are_nested(self, rng):
        pts = rng.random((12, 2))
        a = PointCloud(pts[:5].copy(), 0.1)
        b = PointCloud(pts.copy(), 0.1)
        fam = CompactFamily((a, b))
        assert len(fam.members) == 2

    def test_supremum_over_members(self):
        bundle = build_doubling(grid=512)
        est = compacta_estimate(
            bundle.system, bundle.metric, bundle.family, [0.6, 0.3, 0.15], 6
        )
        # the full circle dominates the arcs
        assert est.headline > 0.4
        assert any("supremum" in d for d in est.diagnostics)


def flat_estimate(base):
    counts = {eps: [base ** n for n in range(1, 9)] for eps in (0.4, 0.2, 0.1)}
    return entropy_estimate(synthetic_table(counts, 10 ** 18))


class TestInequalityReport:
    def test_passing_line(self):
        est = flat_estimate(2)
        verdict = inequality_report(est, est, est)
        assert verdict.passed
        assert verdict.line() == "FR≈BD: pass; BD≥Bc: pass"

    def test_fr_divergence_fails(self):
        bd = flat_estimate(2)
        fr = flat_estimate(3)
        verdict = inequality_report(bd, bd, fr)
        assert not verdict.fr_bd_ok
        assert "fail" in verdict.line()

    def test_bc_above_bd_fails(self):
        bd = flat_estimate(2)
        bc = flat_estimate(3)
        verdict = inequality_report(bd, bc, bd)
        assert not verdict.bd_bc_ok


class TestEstimateCsv:
    def test_round_trip(self, tmp_path):
        bundle = build_doubling(grid=256)
        table = bd_count_table(
            bundle.system, bundle.cloud, MetricSpec.euclidean(), [0.8, 0.4, 0.2], 6
        )
        est = entropy_estimate(table)
        path = tmp_path / "est.csv"
        write_estimate_csv(table, est, str(path))
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 18
        for row in rows:
            eps = float(row["epsilon"])
            n = int(row["n"])
            want = dict(table.counts_for(eps, "sep"))[n]
            assert int(row["sep"]) == want
