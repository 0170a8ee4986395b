"""Dynamical systems as point rules, orbits, and orbit-metric counting.

A system is a step rule on an embedded space together with a domain
predicate.  Orbits that leave the domain raise ``EscapeError`` carrying the
first bad step; the counting front end can instead truncate the table at the
largest step every orbit survives.

The order-n orbit metric between two points is the max over the first n
iterates of the base distance.  Count tables are built incrementally: one
running-max distance matrix per n, shared by all epsilon values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, EscapeError
from .metric_core import (
    EXACT_CAP,
    CountRow,
    CountTable,
    MetricSpec,
    PointCloud,
    SeparationResult,
    counts_from_matrix,
    distance_matrix,
    farthest_point_order,
    pairwise_dist,
)

__all__ = [
    "DynSystem",
    "OrbitTable",
    "iterate_orbit",
    "build_orbit_table",
    "bd_dist",
    "bd_count_table",
    "TransportVerdict",
    "inverse_transport_check",
]


@dataclass(frozen=True)
class DynSystem:
    """A continuous self-map presented as an executable point rule."""

    name: str
    dim: int
    step: Callable[[np.ndarray], np.ndarray]
    domain: Callable[[np.ndarray], bool]
    inverse: Callable[[np.ndarray], np.ndarray] | None = None
    step_batch: Callable[[np.ndarray], np.ndarray] | None = None
    domain_batch: Callable[[np.ndarray], np.ndarray] | None = None
    inverse_batch: Callable[[np.ndarray], np.ndarray] | None = None
    singular_hints: tuple[str, ...] = ()

    @property
    def invertible(self) -> bool:
        return self.inverse is not None

    def _step_many(self, pts: np.ndarray) -> np.ndarray:
        if self.step_batch is not None:
            return np.asarray(self.step_batch(pts), dtype=float)
        return np.stack([np.asarray(self.step(p), dtype=float) for p in pts])

    def _inverse_many(self, pts: np.ndarray) -> np.ndarray:
        if self.inverse is None:
            raise ConfigError(f"config: system {self.name!r} has no inverse")
        if self.inverse_batch is not None:
            return np.asarray(self.inverse_batch(pts), dtype=float)
        return np.stack([np.asarray(self.inverse(p), dtype=float) for p in pts])

    def _domain_many(self, pts: np.ndarray) -> np.ndarray:
        if self.domain_batch is not None:
            return np.asarray(self.domain_batch(pts), dtype=bool)
        return np.array([bool(self.domain(p)) for p in pts])


def iterate_orbit(system: DynSystem, x, n: int) -> np.ndarray:
    """The first ``n`` orbit points (x, f x, ..., f^(n-1) x) as an (n, d) array."""
    if n < 1:
        raise ConfigError("config: orbit length must be >= 1")
    cur = np.asarray(x, dtype=float).reshape(system.dim)
    if not system.domain(cur):
        raise EscapeError(0, cur)
    out = np.empty((n, system.dim))
    out[0] = cur
    for i in range(1, n):
        cur = np.asarray(system.step(cur), dtype=float).reshape(system.dim)
        if not system.domain(cur):
            raise EscapeError(i, out[i - 1])
        out[i] = cur
    return out


@dataclass(frozen=True)
class OrbitTable:
    """Precomputed orbits for every cloud point: orbits[i, k] = f^k(point i)."""

    base: PointCloud
    depth: int
    orbits: np.ndarray  # (size, depth, dim)


def build_orbit_table(
    system: DynSystem,
    cloud: PointCloud,
    depth: int,
    allow_truncation: bool = False,
) -> OrbitTable:
    """Iterate every cloud point ``depth - 1`` times.

    With ``allow_truncation`` the table stops at the largest depth every
    orbit survives instead of raising; the returned depth says how far it got.
    """
    if depth < 1:
        raise ConfigError("config: orbit depth must be >= 1")
    pts = cloud.points
    ok0 = system._domain_many(pts)
    if not ok0.all():
        bad = int(np.flatnonzero(~ok0)[0])
        raise EscapeError(0, pts[bad])
    orbits = np.empty((cloud.size, depth, cloud.dim))
    orbits[:, 0, :] = pts
    cur = pts
    reached = depth
    for k in range(1, depth):
        cur = system._step_many(cur)
        ok = system._domain_many(cur)
        if not ok.all():
            if allow_truncation:
                reached = k
                break
            bad = int(np.flatnonzero(~ok)[0])
            raise EscapeError(k, orbits[bad, k - 1])
        orbits[:, k, :] = cur
    return OrbitTable(cloud, reached, orbits[:, :reached, :])


def bd_dist(system: DynSystem, spec: MetricSpec, x, y, n: int) -> float:
    """Order-n orbit distance: max base distance along the first n iterates."""
    ox = iterate_orbit(system, x, n)
    oy = iterate_orbit(system, y, n)
    return max(pairwise_dist(ox[i], oy[i], spec) for i in range(n))


def _auto_mode(cloud_size: int, mode: str | None) -> str:
    if mode is None:
        return "exact" if cloud_size <= EXACT_CAP else "greedy"
    return mode


def bd_count_table(
    system: DynSystem,
    cloud: PointCloud,
    spec: MetricSpec,
    eps_list: list[float],
    n_max: int,
    mode: str | None = None,
) -> CountTable:
    """Separated/spanning counts over the (eps, n) grid under orbit metrics.

    Mode defaults to exact for clouds within the exhaustive cap and greedy
    above it.  If some orbit escapes at step t < n_max the table is truncated
    there and carries a ``truncated(t)`` note.
    """
    if n_max < 1:
        raise ConfigError("config: n_max must be >= 1")
    if not eps_list:
        return CountTable((), cloud.size)
    if any(not e > 0 for e in eps_list):
        raise ConfigError("config: eps values must be > 0")
    use_mode = _auto_mode(cloud.size, mode)
    table = build_orbit_table(system, cloud, n_max, allow_truncation=True)
    truncated = table.depth if table.depth < n_max else None
    notes = (f"truncated({table.depth})",) if truncated else ()

    counts: dict[tuple[float, int], tuple[SeparationResult, SeparationResult]] = {}
    dmat = np.zeros((cloud.size, cloud.size))
    seed = np.zeros(cloud.size)
    for k in range(table.depth):
        sl = table.orbits[:, k, :]
        np.maximum(dmat, distance_matrix(sl, sl, spec), out=dmat)
        centroid = sl.mean(axis=0)
        np.maximum(seed, distance_matrix(sl, centroid[None, :], spec)[:, 0], out=seed)
        n = k + 1
        order = None
        if use_mode == "greedy":
            order = farthest_point_order(dmat, seed)
        for eps in eps_list:
            counts[(eps, n)] = counts_from_matrix(dmat, eps, use_mode, order=order)

    rows = []
    for eps in eps_list:
        for n in range(1, table.depth + 1):
            sep, span = counts[(eps, n)]
            rows.append(CountRow(eps, n, sep.count, span.count, use_mode))
    return CountTable(tuple(rows), cloud.size, truncated, notes)


@dataclass(frozen=True)
class TransportVerdict:
    """Outcome of pushing a separated witness through the inverse map."""

    passed: bool
    eps: float
    n: int
    witness_size: int
    pairs_checked: int
    min_separation: float

    def line(self) -> str:
        status = "pass" if self.passed else "fail"
        return (
            f"inverse-transport(eps={self.eps:g}, n={self.n}): {status} "
            f"[witness {self.witness_size}, min pairwise {self.min_separation:.6g}]"
        )


def inverse_transport_check(
    system: DynSystem,
    cloud: PointCloud,
    spec: MetricSpec,
    eps: float,
    n: int,
    mode: str | None = None,
) -> TransportVerdict:
    """Check that f^(n-1) of an (n,eps)-separated set is separated under f^(-1).

    Takes the greedy (or exact) witness, maps it forward n-1 steps, rebuilds
    backward orbits with the inverse rule, and verifies every pair clears eps
    at some backward step.  Index reversal makes this an identity on the set
    of step distances, so it must pass with no slack.
    """
    if system.inverse is None:
        raise ConfigError(f"config: system {system.name!r} has no inverse")
    use_mode = _auto_mode(cloud.size, mode)
    table = build_orbit_table(system, cloud, n)
    dmat = np.zeros((cloud.size, cloud.size))
    seed = np.zeros(cloud.size)
    for k in range(n):
        sl = table.orbits[:, k, :]
        np.maximum(dmat, distance_matrix(sl, sl, spec), out=dmat)
        centroid = sl.mean(axis=0)
        np.maximum(seed, distance_matrix(sl, centroid[None, :], spec)[:, 0], out=seed)
    order = farthest_point_order(dmat, seed) if use_mode == "greedy" else None
    sep, _ = counts_from_matrix(dmat, eps, use_mode, order=order)
    witness = np.array(sep.witness, dtype=np.intp)

    # backward orbits of the transported set, recomputed through the inverse
    tips = table.orbits[witness, n - 1, :]
    back = np.empty((len(witness), n, cloud.dim))
    back[:, 0, :] = tips
    cur = tips
    for k in range(1, n):
        cur = system._inverse_many(cur)
        back[:, k, :] = cur

    bmat = np.zeros((len(witness), len(witness)))
    for k in range(n):
        sl = back[:, k, :]
        np.maximum(bmat, distance_matrix(sl, sl, spec), out=bmat)
    iu = np.triu_indices(len(witness), k=1)
    min_sep = float(bmat[iu].min()) if len(iu[0]) else float("inf")
    return TransportVerdict(
        passed=bool(min_sep >= eps),
        eps=eps,
        n=n,
        witness_size=len(witness),
        pairs_checked=len(iu[0]),
        min_separation=min_sep,
    )
