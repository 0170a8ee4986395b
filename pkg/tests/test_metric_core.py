"""Counting-engine tests against exhaustive oracles.

The oracles enumerate subsets directly, so they are independent of the
branch-and-bound and greedy code paths they certify.
"""

import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entro import (
    EXACT_CAP,
    EmptyCloudError,
    MeshError,
    MetricSpec,
    PointCloud,
    ShapeError,
    TooLargeError,
    cloud_diameter,
    dense_subsample,
    distance_matrix,
    max_separated,
    min_spanning,
    pairwise_dist,
    subsample_count_check,
)


def brute_max_separated(dists: np.ndarray, eps: float) -> int:
    """Maximum subset with all pairwise distances >= eps, by enumeration."""
    m = dists.shape[0]
    best = 0
    for mask in range(1, 1 << m):
        idx = [i for i in range(m) if mask >> i & 1]
        if len(idx) <= best:
            continue
        if all(dists[a, b] >= eps for a, b in combinations(idx, 2)):
            best = len(idx)
    return best


def brute_min_spanning(dists: np.ndarray, eps: float) -> int:
    """Smallest in-sample center set covering everything within < eps."""
    m = dists.shape[0]
    for size in range(1, m + 1):
        for centers in combinations(range(m), size):
            if np.all(dists[:, centers].min(axis=1) < eps):
                return size
    return m


def random_cloud(rng, size, dim=2):
    return PointCloud(rng.random((size, dim)), mesh=0.05, label="t")


class TestExactCountsMatchOracle:
    @pytest.mark.parametrize("seed", range(6))
    def test_separated(self, seed):
        rng = np.random.default_rng(seed)
        cloud = random_cloud(rng, rng.integers(3, 11))
        spec = MetricSpec.euclidean()
        dists = distance_matrix(cloud.points, cloud.points, spec)
        for eps in (0.15, 0.3, 0.6):
            got = max_separated(cloud, spec, eps, mode="exact")
            assert got.count == brute_max_separated(dists, eps)

    @pytest.mark.parametrize("seed", range(6))
    def test_spanning(self, seed):
        rng = np.random.default_rng(100 + seed)
        cloud = random_cloud(rng, rng.integers(3, 11))
        spec = MetricSpec.euclidean()
        dists = distance_matrix(cloud.points, cloud.points, spec)
        for eps in (0.15, 0.3, 0.6):
            got = min_spanning(cloud, spec, eps, mode="exact")
            assert got.count == brute_min_spanning(dists, eps)

    def test_greedy_separated_is_lower_bound_and_valid(self):
        rng = np.random.default_rng(7)
        cloud = random_cloud(rng, 12)
        spec = MetricSpec.euclidean()
        exact = max_separated(cloud, spec, 0.25, mode="exact")
        greedy = max_separated(cloud, spec, 0.25, mode="greedy")
        assert greedy.count <= exact.count
        pts = cloud.points[list(greedy.witness)]
        d = distance_matrix(pts, pts, spec)
        off = d[~np.eye(len(pts), dtype=bool)]
        assert off.size == 0 or off.min() >= 0.25

    def test_witness_is_separated(self):
        rng = np.random.default_rng(8)
        cloud = random_cloud(rng, 10)
        spec = MetricSpec.euclidean()
        res = max_separated(cloud, spec, 0.3, mode="exact")
        pts = cloud.points[list(res.witness)]
        d = distance_matrix(pts, pts, spec)
        off = d[~np.eye(len(pts), dtype=bool)]
        assert off.size == 0 or off.min() >= 0.3


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=10),
    st.integers(min_value=0, max_value=10_000),
    st.floats(min_value=0.05, max_value=1.2),
)
def test_sandwich_property(size, seed, eps):
    """span(eps) <= sep(eps) <= span(eps/2) for exact counts."""
    rng = np.random.default_rng(seed)
    cloud = PointCloud(rng.random((size, 2)), mesh=0.05)
    spec = MetricSpec.euclidean()
    sep = max_separated(cloud, spec, eps, mode="exact").count
    span = min_spanning(cloud, spec, eps, mode="exact").count
    span_half = min_spanning(cloud, spec, eps / 2, mode="exact").count
    assert span <= sep <= span_half


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=9), st.integers(min_value=0, max_value=9999))
def test_exact_sep_nonincreasing_in_eps(size, seed):
    rng = np.random.default_rng(seed)
    cloud = PointCloud(rng.random((size, 2)), mesh=0.05)
    spec = MetricSpec.euclidean()
    counts = [
        max_separated(cloud, spec, eps, mode="exact").count
        for eps in (0.1, 0.2, 0.4, 0.8)
    ]
    assert counts == sorted(counts, reverse=True)


class TestMetricSpecs:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=9999))
    def test_euclidean_axioms(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((6, 3))
        d = distance_matrix(pts, pts, MetricSpec.euclidean())
        assert np.allclose(d, d.T)
        assert np.allclose(np.diag(d), 0.0)
        for i, j, k in combinations(range(6), 3):
            assert d[i, k] <= d[i, j] + d[j, k] + 1e-9

    def test_max_product_is_blockwise_max(self):
        rng = np.random.default_rng(5)
        pts = rng.random((7, 6))
        spec = MetricSpec.max_product(3)
        d = distance_matrix(pts, pts, spec)
        blocks = pts.reshape(7, 3, 2)
        want = np.zeros((7, 7))
        for b in range(3):
            db = np.linalg.norm(blocks[:, None, b] - blocks[None, :, b], axis=-1)
            want = np.maximum(want, db)
        assert np.allclose(d, want)

    def test_sequence_rho_is_weighted_sum(self):
        rng = np.random.default_rng(6)
        pts = rng.random((5, 8))
        spec = MetricSpec.sequence_rho(2.0, truncation=4)
        d = distance_matrix(pts, pts, spec)
        blocks = pts.reshape(5, 4, 2)
        want = np.zeros((5, 5))
        for b in range(4):
            db = np.linalg.norm(blocks[:, None, b] - blocks[None, :, b], axis=-1)
            want += db / 2.0 ** b
        assert np.allclose(d, want)

    def test_pairwise_matches_matrix(self):
        rng = np.random.default_rng(11)
        pts = rng.random((4, 2))
        spec = MetricSpec.euclidean()
        d = distance_matrix(pts, pts, spec)
        assert math.isclose(pairwise_dist(pts[0], pts[3], spec), d[0, 3])


class TestPointCloud:
    def test_duplicates_collapse(self):
        pts = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
        assert PointCloud(pts, 0.1).size == 2

    def test_first_occurrence_wins(self):
        pts = np.array([[0.5, 0.5], [0.5, 0.5], [0.0, 0.0]])
        cloud = PointCloud(pts, 0.1)
        assert np.allclose(cloud.points[0], [0.5, 0.5])

    def test_empty_rejected(self):
        with pytest.raises(EmptyCloudError):
            PointCloud(np.empty((0, 2)), 0.1)

    def test_3d_array_rejected(self):
        with pytest.raises(ShapeError):
            PointCloud(np.zeros((2, 2, 2)), 0.1)

    def test_1d_is_single_point(self):
        assert PointCloud(np.zeros(5), 0.1).points.shape == (1, 5)

    def test_subset(self):
        cloud = PointCloud(np.arange(10, dtype=float)[:, None], 0.1)
        sub = cloud.subset(np.array([1, 3]), "sub")
        assert sub.size == 2 and sub.label == "sub"

    def test_diameter(self):
        cloud = PointCloud(np.array([[0.0, 0.0], [3.0, 4.0]]), 0.1)
        assert math.isclose(cloud_diameter(cloud), 5.0)


class TestExactCap:
    def test_separated_over_cap(self, rng):
        cloud = PointCloud(rng.random((EXACT_CAP + 1, 2)), 0.01)
        with pytest.raises(TooLargeError):
            max_separated(cloud, MetricSpec.euclidean(), 0.1, mode="exact")

    def test_greedy_has_no_cap(self, rng):
        cloud = PointCloud(rng.random((EXACT_CAP + 20, 2)), 0.01)
        res = max_separated(cloud, MetricSpec.euclidean(), 0.1, mode="greedy")
        assert res.count >= 1


class TestDenseSubsample:
    def test_deterministic(self, rng):
        cloud = PointCloud(rng.random((40, 2)), 0.01)
        a = dense_subsample(cloud, 0.5, seed=3)
        b = dense_subsample(cloud, 0.5, seed=3)
        assert np.array_equal(a.points, b.points)

    def test_size(self, rng):
        cloud = PointCloud(rng.random((40, 2)), 0.01)
        assert dense_subsample(cloud, 0.25, seed=0).size == 10

    def test_mesh_claim_includes_covering_radius(self, rng):
        cloud = PointCloud(rng.random((40, 2)), 0.01)
        sub = dense_subsample(cloud, 0.25, seed=1)
        radius = distance_matrix(cloud.points, sub.points, MetricSpec.euclidean()).min(axis=1).max()
        assert math.isclose(sub.mesh, 0.01 + radius)

    def test_keep_all_is_identity(self, rng):
        cloud = PointCloud(rng.random((10, 2)), 0.01)
        assert dense_subsample(cloud, 1.0, seed=0) is cloud


class TestSubsampleCheck:
    def test_passes_on_random_cloud(self, rng):
        cloud = PointCloud(rng.random((18, 2)), 0.05)
        spec = MetricSpec.euclidean()
        rep = subsample_count_check(cloud, spec, eps=0.9, keep_fraction=0.6, seed=2)
        assert rep.passed
        assert rep.sep_sub >= rep.sep_parent or rep.eps_sep < rep.eps
        assert rep.span_sub <= rep.span_parent + 1e-9

    def test_too_sparse_scale_rejected(self, rng):
        from entro import ConfigError

        cloud = PointCloud(rng.random((18, 2)), 0.05)
        spec = MetricSpec.euclidean()
        with pytest.raises(ConfigError):
            subsample_count_check(cloud, spec, eps=0.01, keep_fraction=0.3, seed=2)
