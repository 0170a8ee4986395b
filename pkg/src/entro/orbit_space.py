"""Entropy through the space of orbit sequences.

A point is lifted to its forward orbit; orbit sequences carry the weighted
sum metric ``dhat(x, y) = sum_i rho^(-i) d(x_i, y_i)`` and the dynamics turns
into the index shift.  Estimating entropy of the shift under dhat gives a
third route to the same number, one that never needs compact subsets.

Sequences are truncated at a length where the dropped tail is below a fixed
tolerance, so lifted points are ordinary finite vectors of stacked blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial.distance import cdist

from .dynamics import DynSystem, build_orbit_table
from .errors import ConfigError, NotSemiconjugateError, ShapeError, TooLargeError
from .estimators import EntropyEstimate, ExtrapolationRule, entropy_estimate
from .metric_core import (
    EXACT_CAP,
    CountRow,
    CountTable,
    MetricSpec,
    PointCloud,
    cloud_diameter,
    counts_from_matrix,
    distance_matrix,
    farthest_point_order,
)

__all__ = [
    "OrbitSeqPoint",
    "choose_truncation",
    "lift_point",
    "lift_orbit",
    "dhat_dist",
    "shift_system",
    "friedland_count_table",
    "friedland_estimate",
    "MetricComparisonReport",
    "metric_comparison_check",
    "SemiconjReport",
    "semiconj_check",
]


@dataclass(frozen=True)
class OrbitSeqPoint:
    """A truncated orbit sequence: blocks[i] is the i-th iterate."""

    blocks: np.ndarray  # (M, d)
    rho: float

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=float)
        if b.ndim != 2:
            raise ShapeError("shape: blocks must be an (M, d) array")
        if self.rho <= 1:
            raise ConfigError("config: rho must be > 1")
        object.__setattr__(self, "blocks", b)

    @property
    def flat(self) -> np.ndarray:
        return self.blocks.ravel()

    @property
    def project(self) -> np.ndarray:
        """First block: the base point the sequence was lifted from."""
        return self.blocks[0]

    def distance_to(self, other: "OrbitSeqPoint") -> float:
        return dhat_dist(self.blocks, other.blocks, self.rho)


def dhat_dist(x_blocks, y_blocks, rho: float) -> float:
    """Weighted orbit-sequence distance: sum of rho^(-i) base distances."""
    xs = np.asarray(x_blocks, dtype=float)
    ys = np.asarray(y_blocks, dtype=float)
    if xs.shape != ys.shape:
        raise ShapeError(f"shape: {xs.shape} vs {ys.shape}")
    steps = np.linalg.norm(xs - ys, axis=1)
    weights = rho ** -np.arange(len(steps), dtype=float)
    return float(np.dot(weights, steps))


def choose_truncation(rho: float, diameter: float, tail_tol: float = 1e-6) -> int:
    """Smallest M making the dropped tail of dhat provably below tail_tol.

    Every dropped term is at most rho^(-i) * diameter, so the tail after M
    terms is at most rho^(-M) * diameter / (1 - 1/rho).
    """
    if rho <= 1:
        raise ConfigError("config: rho must be > 1")
    if tail_tol <= 0:
        raise ConfigError("config: tail_tol must be > 0")
    if diameter < 0:
        raise ConfigError("config: diameter must be >= 0")
    if diameter == 0:
        return 1
    factor = diameter / (1 - 1 / rho)
    m = max(1, math.ceil(math.log(factor / tail_tol) / math.log(rho)))
    while rho ** -m * factor >= tail_tol:
        m += 1
    return m


def lift_point(system: DynSystem, x, rho: float, truncation: int) -> OrbitSeqPoint:
    """Lift one point to its truncated orbit sequence."""
    from .dynamics import iterate_orbit

    return OrbitSeqPoint(iterate_orbit(system, x, truncation), rho)


def lift_orbit(system: DynSystem, cloud: PointCloud, truncation: int) -> PointCloud:
    """Lift every cloud point to its stacked length-M orbit vector."""
    if truncation < 1:
        raise ConfigError("config: truncation must be >= 1")
    table = build_orbit_table(system, cloud, truncation)
    flat = table.orbits.reshape(cloud.size, truncation * cloud.dim)
    return PointCloud(flat.copy(), cloud.mesh, f"{cloud.label}|lift({truncation})")


def shift_system(system: DynSystem, truncation: int) -> DynSystem:
    """The index shift on stacked orbit vectors of the given system.

    Acting on a lifted orbit, dropping the first block and appending the step
    of the last block is exactly starting the orbit one iterate later, so
    lifting intertwines the base map with this shift.
    """
    if truncation < 1:
        raise ConfigError("config: truncation must be >= 1")
    d = system.dim

    def step(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return np.concatenate([v[d:], np.asarray(system.step(v[-d:]), dtype=float)])

    def step_batch(pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        new_last = system._step_many(pts[:, -d:])
        return np.concatenate([pts[:, d:], new_last], axis=1)

    inverse = None
    inverse_batch = None
    if system.inverse is not None:
        def inverse(v: np.ndarray) -> np.ndarray:
            v = np.asarray(v, dtype=float)
            first = np.asarray(system.inverse(v[:d]), dtype=float)
            return np.concatenate([first, v[:-d]])

        def inverse_batch(pts: np.ndarray) -> np.ndarray:
            pts = np.asarray(pts, dtype=float)
            firsts = system._inverse_many(pts[:, :d])
            return np.concatenate([firsts, pts[:, :-d]], axis=1)

    return DynSystem(
        name=f"shift[{system.name},M={truncation}]",
        dim=truncation * d,
        step=step,
        domain=lambda v: True,
        inverse=inverse,
        step_batch=step_batch,
        domain_batch=lambda pts: np.ones(len(pts), dtype=bool),
        inverse_batch=inverse_batch,
    )


def _orbit_diameter_bound(orbits: np.ndarray) -> float:
    """Bounding-box diagonal over all orbit points, a cheap diameter bound."""
    flat = orbits.reshape(-1, orbits.shape[-1])
    span = flat.max(axis=0) - flat.min(axis=0)
    return float(np.linalg.norm(span))


def friedland_count_table(
    system: DynSystem,
    cloud: PointCloud,
    eps_list: list[float],
    n_max: int,
    rho: float = 2.0,
    truncation: int | None = None,
    mode: str | None = None,
) -> CountTable:
    """Counts for the shift on lifted orbit sequences under the dhat metric.

    The order-n shift distance is the running max over i < n of the weighted
    sums S_i = sum_{j<M} rho^(-j) d(x_{i+j}, y_{i+j}).  Rather than hold M
    distance matrices, S advances by the identity
    S_{i+1} = rho * (S_i - D_i) + rho^(1-M) * D_{i+M}, with each per-iterate
    matrix D_k recomputed on demand.  Base metric is euclidean.
    """
    if n_max < 1:
        raise ConfigError("config: n_max must be >= 1")
    if not eps_list:
        return CountTable((), cloud.size)
    if any(not e > 0 for e in eps_list):
        raise ConfigError("config: eps values must be > 0")
    if rho <= 1:
        raise ConfigError("config: rho must be > 1")

    probe = build_orbit_table(system, cloud, min(n_max, 4))
    diam = _orbit_diameter_bound(probe.orbits)
    m = truncation if truncation is not None else choose_truncation(rho, max(diam, 1e-12))
    if m < 1:
        raise ConfigError("config: truncation must be >= 1")

    depth = m + n_max - 1
    table = build_orbit_table(system, cloud, depth)
    orbits = table.orbits
    use_mode = mode or ("exact" if cloud.size <= EXACT_CAP else "greedy")

    def slice_dm(k: int) -> np.ndarray:
        pts = orbits[:, k, :]
        return cdist(pts, pts)

    def slice_seed(k: int) -> np.ndarray:
        pts = orbits[:, k, :]
        return np.linalg.norm(pts - pts.mean(axis=0), axis=1)

    # S_0 and its seed analogue (distance to the running centroid sequence)
    s_mat = np.zeros((cloud.size, cloud.size))
    s_seed = np.zeros(cloud.size)
    w = 1.0
    for j in range(m):
        s_mat += w * slice_dm(j)
        s_seed += w * slice_seed(j)
        w /= rho
    tail_w = rho ** (1 - m)

    run_mat = np.zeros_like(s_mat)
    run_seed = np.zeros_like(s_seed)
    counts: dict[tuple[float, int], tuple] = {}
    for i in range(n_max):
        np.maximum(run_mat, s_mat, out=run_mat)
        np.maximum(run_seed, s_seed, out=run_seed)
        n = i + 1
        order = None
        if use_mode == "greedy":
            order = farthest_point_order(run_mat, run_seed)
        for eps in eps_list:
            counts[(eps, n)] = counts_from_matrix(run_mat, eps, use_mode, order=order)
        if n < n_max:
            s_mat = rho * (s_mat - slice_dm(i)) + tail_w * slice_dm(i + m)
            np.maximum(s_mat, 0.0, out=s_mat)
            s_seed = rho * (s_seed - slice_seed(i)) + tail_w * slice_seed(i + m)
            np.maximum(s_seed, 0.0, out=s_seed)

    rows = []
    for eps in eps_list:
        for n in range(1, n_max + 1):
            sep, span = counts[(eps, n)]
            rows.append(CountRow(eps, n, sep.count, span.count, use_mode))
    return CountTable(
        tuple(rows), cloud.size, None, (f"rho={rho:g}", f"truncation={m}")
    )


def friedland_estimate(
    system: DynSystem,
    cloud: PointCloud,
    eps_list: list[float],
    n_max: int,
    rho: float = 2.0,
    truncation: int | None = None,
    rule: ExtrapolationRule | None = None,
    mode: str | None = None,
) -> EntropyEstimate:
    """Headline entropy of the shift on lifted orbit sequences."""
    table = friedland_count_table(
        system, cloud, eps_list, n_max, rho=rho, truncation=truncation, mode=mode
    )
    est = entropy_estimate(table, rule, method="friedland")
    return replace(est, diagnostics=est.diagnostics + table.notes)


# ---------------------------------------------------------------------------
# consistency checks


@dataclass(frozen=True)
class MetricComparisonReport:
    """Sampled two-sided comparison between dhat and the order-n max metrics.

    The cutoff ``n_tail`` is the smallest length whose dropped dhat tail is
    below eps.  forward: dhat < rho^(-n) * eps forces every base distance
    before step n below eps.  reverse: base distances before step n_tail all
    below eps force dhat below (n_tail + 1) * eps.  Both violation counts
    should be zero.
    """

    pairs_checked: int
    forward_hits: int
    forward_violations: int
    reverse_hits: int
    reverse_violations: int
    eps: float
    n_tail: int
    rho: float
    truncation: int

    @property
    def passed(self) -> bool:
        return self.forward_violations == 0 and self.reverse_violations == 0

    def line(self) -> str:
        status = "pass" if self.passed else "fail"
        return (
            f"metric-comparison(eps={self.eps:g}, rho={self.rho:g}): {status} "
            f"[{self.pairs_checked} pairs, forward {self.forward_violations} bad "
            f"of {self.forward_hits}, reverse {self.reverse_violations} bad "
            f"of {self.reverse_hits}]"
        )


def metric_comparison_check(
    system: DynSystem,
    cloud: PointCloud,
    rho: float = 2.0,
    eps: float = 0.1,
    sample_pairs: int = 500,
    seed: int = 0,
) -> MetricComparisonReport:
    """Test the dhat vs d_n comparison inequalities on sampled point pairs."""
    if eps <= 0:
        raise ConfigError("config: eps must be > 0")
    if rho <= 1:
        raise ConfigError("config: rho must be > 1")
    diam = cloud_diameter(cloud)
    n_tail = choose_truncation(rho, max(diam, 1e-12), tail_tol=eps)
    m = max(choose_truncation(rho, max(diam, 1e-12)), n_tail + 1)
    table = build_orbit_table(system, cloud, m)
    orbits = table.orbits

    rng = np.random.default_rng(seed)
    k = min(sample_pairs, cloud.size * (cloud.size - 1) // 2)
    ii = rng.integers(0, cloud.size, size=4 * k + 8)
    jj = rng.integers(0, cloud.size, size=4 * k + 8)
    keep = ii != jj
    ii, jj = ii[keep][:k], jj[keep][:k]

    weights = rho ** -np.arange(m, dtype=float)
    fwd_hits = fwd_bad = rev_hits = rev_bad = 0
    for a, b in zip(ii, jj):
        steps = np.linalg.norm(orbits[a] - orbits[b], axis=1)
        dh = float(np.dot(weights, steps))
        if dh < rho ** -n_tail * eps:
            fwd_hits += 1
            if float(steps[:n_tail].max()) >= eps:
                fwd_bad += 1
        if float(steps[:n_tail].max()) < eps:
            rev_hits += 1
            if dh >= (n_tail + 1) * eps:
                rev_bad += 1
    return MetricComparisonReport(
        pairs_checked=int(len(ii)),
        forward_hits=fwd_hits,
        forward_violations=fwd_bad,
        reverse_hits=rev_hits,
        reverse_violations=rev_bad,
        eps=eps,
        n_tail=n_tail,
        rho=rho,
        truncation=m,
    )


@dataclass(frozen=True)
class SemiconjReport:
    """Count comparison across a factor map.

    If h carries the upstairs dynamics onto the downstairs one and shrinks
    distances no worse than the stated modulus, every downstairs separated
    set pulls back, so upstairs counts dominate.
    """

    residual: float
    eps_down: float
    delta_up: float
    n: int
    sep_up: int
    sep_down: int
    span_up: int
    span_down: int

    @property
    def passed(self) -> bool:
        return self.sep_up >= self.sep_down and self.span_up >= self.span_down

    def line(self) -> str:
        status = "pass" if self.passed else "fail"
        return (
            f"factor-counts(n={self.n}): {status} "
            f"[sep {self.sep_up}>={self.sep_down}, span {self.span_up}>={self.span_down}, "
            f"residual {self.residual:.3g}]"
        )


def _exact_bd_matrix(
    system: DynSystem, cloud: PointCloud, spec: MetricSpec, n: int
) -> np.ndarray:
    table = build_orbit_table(system, cloud, n)
    dmat = np.zeros((cloud.size, cloud.size))
    for k in range(n):
        sl = table.orbits[:, k, :]
        np.maximum(dmat, distance_matrix(sl, sl, spec), out=dmat)
    return dmat


def semiconj_check(
    up_system: DynSystem,
    down_system: DynSystem,
    h,
    cloud: PointCloud,
    eps_down: float,
    n: int,
    delta_up: float | None = None,
    modulus=None,
    up_spec: MetricSpec | None = None,
    down_spec: MetricSpec | None = None,
    residual_tol: float = 1e-9,
) -> SemiconjReport:
    """Verify count domination across a factor map on a small cloud.

    ``h`` maps upstairs points to downstairs points; ``modulus`` bounds how
    far h can spread a distance (default: identity, i.e. 1-Lipschitz), and
    ``delta_up`` is the upstairs scale whose modulus value stays within
    ``eps_down`` (default eps_down itself).  The cloud must fit the exact
    counter; greedy counts cannot certify an inequality.
    """
    if cloud.size > EXACT_CAP:
        raise TooLargeError(
            f"too-large: factor check needs exact counts, cap {EXACT_CAP}, got {cloud.size}"
        )
    up_spec = up_spec or MetricSpec.euclidean()
    down_spec = down_spec or MetricSpec.euclidean()
    delta_up = eps_down if delta_up is None else delta_up
    mod = modulus or (lambda t: t)
    if mod(delta_up) > eps_down + 1e-12:
        raise ConfigError(
            f"config: modulus({delta_up:g}) = {mod(delta_up):g} exceeds eps_down {eps_down:g}"
        )

    up_table = build_orbit_table(up_system, cloud, n + 1)
    down_pts = np.stack([np.asarray(h(p), dtype=float) for p in cloud.points])
    worst = 0.0
    for i in range(cloud.size):
        pushed = np.asarray(h(up_table.orbits[i, 1, :]), dtype=float)
        stepped = np.asarray(down_system.step(down_pts[i]), dtype=float)
        worst = max(worst, float(np.linalg.norm(pushed - stepped)))
    if worst > residual_tol:
        raise NotSemiconjugateError(
            f"not-semiconjugate: residual {worst:.3g} exceeds {residual_tol:g}"
        )

    down_cloud = PointCloud(down_pts, cloud.mesh, f"{cloud.label}|image")
    up_mat = _exact_bd_matrix(up_system, cloud, up_spec, n)
    down_mat = _exact_bd_matrix(down_system, down_cloud, down_spec, n)
    sep_up, span_up = counts_from_matrix(up_mat, delta_up, "exact")
    sep_down, span_down = counts_from_matrix(down_mat, eps_down, "exact")
    return SemiconjReport(
        residual=worst,
        eps_down=eps_down,
        delta_up=delta_up,
        n=n,
        sep_up=sep_up.count,
        sep_down=sep_down.count,
        span_up=span_up.count,
        span_down=span_down.count,
    )
