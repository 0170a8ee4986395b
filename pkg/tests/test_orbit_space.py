"""Orbit-sequence lifting, the weighted shift metric, and the cross checks."""

import math

import numpy as np
import pytest

from entro import (
    ConfigError,
    DynSystem,
    MetricSpec,
    NotSemiconjugateError,
    OrbitSeqPoint,
    PointCloud,
    ShapeError,
    TooLargeError,
    bd_count_table,
    choose_truncation,
    dhat_dist,
    entropy_estimate,
    friedland_count_table,
    friedland_estimate,
    iterate_orbit,
    lift_orbit,
    lift_point,
    metric_comparison_check,
    semiconj_check,
    shift_system,
)
from entro.gallery import build_doubling


@pytest.fixture(scope="module")
def doubling():
    return build_doubling(grid=256)


def circle_cloud(count: int, label: str = "ring") -> PointCloud:
    theta = np.arange(count) * (2.0 * math.pi / count)
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    return PointCloud(pts, 2.0 * math.pi / count, label)


class TestChooseTruncation:
    def test_hand_value(self):
        # factor = 1 / (1 - 1/2) = 2; need 2^-M * 2 < 1e-6, first M is 21
        assert choose_truncation(2.0, 1.0, tail_tol=1e-6) == 21

    def test_bound_is_tight(self):
        for rho in (1.5, 2.0, 3.0, 6.0):
            for diam in (0.3, 1.0, 4.0):
                for tol in (1e-3, 1e-6):
                    m = choose_truncation(rho, diam, tail_tol=tol)
                    factor = diam / (1.0 - 1.0 / rho)
                    assert rho**-m * factor < tol
                    if m > 1:
                        assert rho ** -(m - 1) * factor >= tol

    def test_zero_diameter(self):
        assert choose_truncation(3.0, 0.0) == 1

    def test_bad_args(self):
        with pytest.raises(ConfigError):
            choose_truncation(1.0, 1.0)
        with pytest.raises(ConfigError):
            choose_truncation(2.0, 1.0, tail_tol=0.0)
        with pytest.raises(ConfigError):
            choose_truncation(2.0, -1.0)


class TestDhatDist:
    def test_hand_value(self):
        x = [[0.0, 0.0], [1.0, 0.0]]
        y = [[0.0, 3.0], [1.0, 4.0]]
        # step distances 3 and 4, weights 1 and 1/2
        assert dhat_dist(x, y, 2.0) == pytest.approx(5.0, abs=1e-12)

    def test_matches_manual_sum(self, rng):
        x = rng.normal(size=(7, 3))
        y = rng.normal(size=(7, 3))
        rho = 2.5
        want = sum(
            rho**-i * float(np.linalg.norm(x[i] - y[i])) for i in range(7)
        )
        assert dhat_dist(x, y, rho) == pytest.approx(want, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            dhat_dist(np.zeros((3, 2)), np.zeros((4, 2)), 2.0)

    def test_seq_point_wraps_same_metric(self, rng):
        a = rng.normal(size=(5, 2))
        b = rng.normal(size=(5, 2))
        pa = OrbitSeqPoint(a, 3.0)
        pb = OrbitSeqPoint(b, 3.0)
        assert pa.distance_to(pb) == pytest.approx(dhat_dist(a, b, 3.0))
        assert np.array_equal(pa.project, a[0])
        assert np.array_equal(pa.flat, a.ravel())

    def test_seq_point_guards(self):
        with pytest.raises(ConfigError):
            OrbitSeqPoint(np.zeros((3, 2)), 1.0)
        with pytest.raises(ShapeError):
            OrbitSeqPoint(np.zeros(6), 2.0)


class TestLiftAndShift:
    def test_lift_point_is_the_orbit(self, doubling):
        x = doubling.cloud.points[5]
        lifted = lift_point(doubling.system, x, 2.0, 6)
        assert np.array_equal(lifted.blocks, iterate_orbit(doubling.system, x, 6))

    def test_lift_orbit_stacks_rows(self, doubling):
        cloud = circle_cloud(8)
        lifted = lift_orbit(doubling.system, cloud, 4)
        assert lifted.points.shape == (8, 8)
        for i in range(8):
            want = iterate_orbit(doubling.system, cloud.points[i], 4).ravel()
            assert np.array_equal(lifted.points[i], want)
        assert lifted.label.endswith("|lift(4)")

    def test_lift_requires_positive_truncation(self, doubling):
        with pytest.raises(ConfigError):
            lift_orbit(doubling.system, circle_cloud(4), 0)

    def test_shift_intertwines_base_step(self, doubling):
        cloud = circle_cloud(10)
        m = 5
        lifted = lift_orbit(doubling.system, cloud, m)
        shift = shift_system(doubling.system, m)
        assert shift.dim == m * 2
        for i in range(cloud.size):
            stepped = shift.step(lifted.points[i])
            fx = doubling.system.step(cloud.points[i])
            want = iterate_orbit(doubling.system, fx, m).ravel()
            assert np.allclose(stepped, want, atol=1e-12)

    def test_shift_batch_matches_single(self, doubling):
        lifted = lift_orbit(doubling.system, circle_cloud(9), 4)
        shift = shift_system(doubling.system, 4)
        batch = shift.step_batch(lifted.points)
        for i in range(9):
            assert np.allclose(batch[i], shift.step(lifted.points[i]), atol=0)

    def test_shift_inverse_roundtrip(self):
        ang = 0.7
        rot = np.array(
            [[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]]
        )
        system = DynSystem(
            name="rotation",
            dim=2,
            step=lambda p: rot @ p,
            domain=lambda p: True,
            inverse=lambda p: rot.T @ p,
        )
        shift = shift_system(system, 4)
        assert shift.invertible
        v = lift_orbit(system, PointCloud([1.0, 0.0], 0.1, "seed"), 4).points[0]
        assert np.allclose(shift.inverse(shift.step(v)), v, atol=1e-12)
        assert np.allclose(shift.step(shift.inverse(v)), v, atol=1e-12)

    def test_shift_of_noninvertible_has_no_inverse(self, doubling):
        assert shift_system(doubling.system, 3).inverse is None


class TestFriedlandCounts:
    def test_dominates_base_counts(self, doubling):
        """Each summand of the lifted metric starts with the base distance, so
        lifted counts can never fall below the base counts at the same scale."""
        cloud = circle_cloud(20)
        eps_list = [0.8, 0.4, 0.2]
        fr = friedland_count_table(doubling.system, cloud, eps_list, 5, rho=4.0)
        bd = bd_count_table(
            doubling.system, cloud, MetricSpec.euclidean(), eps_list, 5
        )
        bd_rows = {(r.epsilon, r.n): r for r in bd.rows}
        assert all(r.mode == "exact" for r in fr.rows)
        for row in fr.rows:
            base = bd_rows[(row.epsilon, row.n)]
            assert row.sep_count >= base.sep_count
            assert row.span_count >= base.span_count

    def test_notes_record_settings(self, doubling):
        table = friedland_count_table(
            doubling.system, circle_cloud(12), [0.4], 3, rho=4.0, truncation=7
        )
        assert "rho=4" in table.notes[0]
        assert "truncation=7" in table.notes[1]

    def test_estimate_tracks_base_estimate(self):
        bundle = build_doubling(grid=1024)
        eps_list = [0.8, 0.4, 0.2]
        fr = friedland_estimate(
            bundle.system, bundle.cloud, eps_list, 8, rho=4.0
        )
        bd = entropy_estimate(
            bd_count_table(
                bundle.system, bundle.cloud, bundle.metric, eps_list, 8
            )
        )
        assert abs(fr.headline - bd.headline) <= 0.15
        assert 0.5 < bd.headline < 0.9

    def test_bad_args(self, doubling):
        cloud = circle_cloud(6)
        with pytest.raises(ConfigError):
            friedland_count_table(doubling.system, cloud, [0.4], 0)
        with pytest.raises(ConfigError):
            friedland_count_table(doubling.system, cloud, [-0.4], 3)
        with pytest.raises(ConfigError):
            friedland_count_table(doubling.system, cloud, [0.4], 3, rho=1.0)


class TestMetricComparison:
    def test_doubling_has_zero_violations(self, doubling):
        report = metric_comparison_check(
            doubling.system, doubling.cloud, rho=4.0, eps=0.1,
            sample_pairs=400, seed=3,
        )
        assert report.passed
        assert report.pairs_checked == 400
        assert report.forward_violations == 0
        assert report.reverse_violations == 0
        assert "pass" in report.line()

    def test_close_pair_hits_both_sides(self, doubling):
        t = 0.3
        pts = np.array(
            [
                [math.cos(t), math.sin(t)],
                [math.cos(t + 1e-9), math.sin(t + 1e-9)],
            ]
        )
        cloud = PointCloud(pts, 1e-9, "near-pair")
        report = metric_comparison_check(
            doubling.system, cloud, rho=4.0, eps=0.1, sample_pairs=10, seed=0
        )
        assert report.passed
        assert report.forward_hits > 0
        assert report.reverse_hits > 0

    def test_bad_args(self, doubling):
        with pytest.raises(ConfigError):
            metric_comparison_check(doubling.system, doubling.cloud, eps=0.0)
        with pytest.raises(ConfigError):
            metric_comparison_check(doubling.system, doubling.cloud, rho=1.0)


class TestSemiconjCheck:
    def test_identity_factor(self, doubling):
        cloud = circle_cloud(12)
        rep = semiconj_check(
            doubling.system, doubling.system, lambda p: p, cloud, 0.4, 4
        )
        assert rep.residual == 0.0
        assert rep.sep_up == rep.sep_down
        assert rep.span_up == rep.span_down
        assert rep.passed
        assert "pass" in rep.line()

    def test_block_projection_from_shift(self, doubling):
        """Dropping all but the first block carries the shift onto the base map."""
        m = 4
        cloud = circle_cloud(12)
        lifted = lift_orbit(doubling.system, cloud, m)
        up = shift_system(doubling.system, m)
        rep = semiconj_check(
            up, doubling.system, lambda v: np.asarray(v)[:2], lifted, 0.4, 4
        )
        assert rep.residual == 0.0
        assert rep.passed
        assert rep.sep_up >= rep.sep_down

    def test_squaring_collapses_onto_itself(self, doubling):
        """z -> z^2 commutes with itself and doubles distances at worst."""
        cloud = circle_cloud(12)
        rep = semiconj_check(
            doubling.system,
            doubling.system,
            doubling.system.step,
            cloud,
            0.4,
            4,
            delta_up=0.2,
            modulus=lambda t: 2.0 * t,
        )
        assert rep.residual == 0.0
        assert rep.passed

    def test_rotation_is_not_a_factor_map(self, doubling):
        ang = 1.0
        rot = np.array(
            [[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]]
        )
        with pytest.raises(NotSemiconjugateError):
            semiconj_check(
                doubling.system, doubling.system, lambda p: rot @ p,
                circle_cloud(8), 0.4, 3,
            )

    def test_modulus_must_fit_downstairs_scale(self, doubling):
        with pytest.raises(ConfigError):
            semiconj_check(
                doubling.system, doubling.system, lambda p: p,
                circle_cloud(8), 0.4, 3,
                delta_up=0.2, modulus=lambda t: 3.0 * t,
            )

    def test_cloud_must_fit_exact_counter(self, doubling):
        with pytest.raises(TooLargeError):
            semiconj_check(
                doubling.system, doubling.system, lambda p: p,
                circle_cloud(30), 0.4, 3,
            )
