"""Metric primitives and packing/covering counters on finite point clouds.

Three metric families cover everything the estimators need:

* ``euclidean`` -- the ambient metric of an embedded system;
* ``max_product`` -- max over consecutive coordinate blocks, the metric of a
  finite orbit segment (block i holds the i-th iterate);
* ``sequence_rho`` -- geometrically weighted sum over blocks, the metric of a
  truncated orbit sequence with weight rho^(-i) on block i.

Counts come in two modes.  Greedy mode scans the cloud in farthest-point
order and is valid at any size; exact mode runs branch-and-bound searches
(maximum independent set for separation, minimum set cover for spanning) and
is capped at ``EXACT_CAP`` points.  Separation uses the closed condition
``d >= eps``; spanning uses the strict ``d < eps``.
"""

from __future__ import annotations

import csv
import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .errors import (
    ConfigError,
    EmptyCloudError,
    ShapeError,
    TooLargeError,
)

__all__ = [
    "EXACT_CAP",
    "DUPLICATE_TOL",
    "MetricSpec",
    "PointCloud",
    "SeparationResult",
    "CountRow",
    "CountTable",
    "pairwise_dist",
    "distance_matrix",
    "cloud_diameter",
    "max_separated",
    "min_spanning",
    "counts_from_matrix",
    "farthest_point_order",
    "dense_subsample",
    "SubsampleCountReport",
    "subsample_count_check",
    "save_cloud_csv",
    "load_cloud_csv",
    "save_count_table_csv",
    "load_count_table_csv",
    "validate_count_table",
]

EXACT_CAP = 24
DUPLICATE_TOL = 1e-12

_KINDS = ("euclidean", "max_product", "sequence_rho")


@dataclass(frozen=True)
class MetricSpec:
    """Which distance to use and how to read a point's coordinate vector."""

    kind: str = "euclidean"
    arity: int = 1
    rho: float = 2.0
    truncation: int = 1
    tolerance: float = DUPLICATE_TOL

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigError(f"config: unknown metric kind {self.kind!r}")
        if self.tolerance < 0:
            raise ConfigError("config: tolerance must be >= 0")
        if self.kind == "max_product" and self.arity < 1:
            raise ConfigError("config: max_product arity must be >= 1")
        if self.kind == "sequence_rho":
            if self.rho <= 1:
                raise ConfigError("config: sequence_rho requires rho > 1")
            if self.truncation < 1:
                raise ConfigError("config: sequence_rho truncation must be >= 1")

    @classmethod
    def euclidean(cls, tolerance: float = DUPLICATE_TOL) -> "MetricSpec":
        return cls(kind="euclidean", tolerance=tolerance)

    @classmethod
    def max_product(cls, arity: int, tolerance: float = DUPLICATE_TOL) -> "MetricSpec":
        return cls(kind="max_product", arity=arity, tolerance=tolerance)

    @classmethod
    def sequence_rho(
        cls, rho: float, truncation: int, tolerance: float = DUPLICATE_TOL
    ) -> "MetricSpec":
        return cls(kind="sequence_rho", rho=rho, truncation=truncation, tolerance=tolerance)

    @property
    def blocks(self) -> int:
        if self.kind == "max_product":
            return self.arity
        if self.kind == "sequence_rho":
            return self.truncation
        return 1

    def describe(self) -> str:
        if self.kind == "max_product":
            return f"max_product({self.arity})"
        if self.kind == "sequence_rho":
            return f"sequence_rho({self.rho:g},{self.truncation})"
        return "euclidean"


def _as_points(arr, name: str) -> np.ndarray:
    pts = np.asarray(arr, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise ShapeError(f"shape: {name} must be a 2-d array of row vectors")
    if not np.isfinite(pts).all():
        raise ConfigError(f"config: {name} contains non-finite coordinates")
    return pts


@dataclass(frozen=True, eq=False)
class PointCloud:
    """A finite sample of a totally bounded space.

    ``mesh`` is the claimed density: every point of the underlying space is
    within ``mesh`` of some sample point.  Construction collapses duplicate
    rows closer than ``DUPLICATE_TOL`` (first occurrence wins).
    """

    points: np.ndarray
    mesh: float
    label: str = ""

    def __post_init__(self):
        pts = _as_points(self.points, "points")
        if pts.shape[0] == 0:
            raise EmptyCloudError("empty: cloud has no points")
        if not self.mesh > 0:
            raise ConfigError("config: mesh must be > 0")
        pts = _collapse_duplicates(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def subset(self, indices, label: str | None = None) -> "PointCloud":
        idx = np.asarray(indices, dtype=np.intp)
        return PointCloud(self.points[idx].copy(), self.mesh, label or self.label)


def _collapse_duplicates(pts: np.ndarray) -> np.ndarray:
    if pts.shape[0] < 2:
        return pts.copy()
    pairs = cKDTree(pts).query_pairs(DUPLICATE_TOL, output_type="ndarray")
    if len(pairs) == 0:
        return pts.copy()
    drop = np.zeros(pts.shape[0], dtype=bool)
    for i, j in pairs:
        lo, hi = (i, j) if i < j else (j, i)
        if not drop[lo]:
            drop[hi] = True
    return pts[~drop].copy()


# ---------------------------------------------------------------------------
# distances


def _block_shapes(dim: int, spec: MetricSpec) -> tuple[int, int]:
    blocks = spec.blocks
    if dim % blocks != 0:
        raise ShapeError(
            f"shape: dimension {dim} not divisible into {blocks} blocks for {spec.describe()}"
        )
    return blocks, dim // blocks


def distance_matrix(a, b, spec: MetricSpec) -> np.ndarray:
    """All pairwise distances between the rows of ``a`` and of ``b``."""
    pa = _as_points(a, "a")
    pb = _as_points(b, "b")
    if pa.shape[1] != pb.shape[1]:
        raise ShapeError(f"shape: dimension mismatch {pa.shape[1]} vs {pb.shape[1]}")
    if spec.kind == "euclidean":
        return cdist(pa, pb)
    blocks, bdim = _block_shapes(pa.shape[1], spec)
    va = pa.reshape(pa.shape[0], blocks, bdim)
    vb = pb.reshape(pb.shape[0], blocks, bdim)
    if spec.kind == "max_product":
        out = cdist(va[:, 0, :], vb[:, 0, :])
        for i in range(1, blocks):
            np.maximum(out, cdist(va[:, i, :], vb[:, i, :]), out=out)
        return out
    # sequence_rho: weighted sum, weight rho^(-i) on block i
    out = cdist(va[:, 0, :], vb[:, 0, :])
    w = 1.0
    for i in range(1, blocks):
        w /= spec.rho
        out += w * cdist(va[:, i, :], vb[:, i, :])
    return out


def pairwise_dist(a, b, spec: MetricSpec) -> float:
    """Distance between two single points under ``spec``."""
    va = np.asarray(a, dtype=float).ravel()
    vb = np.asarray(b, dtype=float).ravel()
    if va.shape != vb.shape:
        raise ShapeError(f"shape: {va.shape} vs {vb.shape}")
    return float(distance_matrix(va[None, :], vb[None, :], spec)[0, 0])


def cloud_diameter(cloud: PointCloud, spec: MetricSpec | None = None) -> float:
    """Max pairwise distance; euclidean bounding-box bound above 4000 points."""
    if spec is None:
        spec = MetricSpec.euclidean()
    if spec.kind == "euclidean" and cloud.size > 4000:
        span = cloud.points.max(axis=0) - cloud.points.min(axis=0)
        return float(np.linalg.norm(span))
    return float(distance_matrix(cloud.points, cloud.points, spec).max())


# ---------------------------------------------------------------------------
# greedy counting


def farthest_point_order(dmat: np.ndarray, seed_dists: np.ndarray) -> np.ndarray:
    """Deterministic farthest-point traversal.

    Starts from the point maximizing ``seed_dists`` (distance to the cloud
    centroid) and repeatedly appends the point farthest from everything
    ordered so far.  Ties resolve to the lowest index via argmax-first-hit.
    """
    n = dmat.shape[0]
    order = np.empty(n, dtype=np.intp)
    work = np.asarray(seed_dists, dtype=float).copy()
    for k in range(n):
        i = int(np.argmax(work))
        order[k] = i
        np.minimum(work, dmat[i], out=work)
        work[i] = -np.inf
    return order


def _greedy_separated(dmat: np.ndarray, order: np.ndarray, eps: float) -> list[int]:
    blocked = np.zeros(dmat.shape[0], dtype=bool)
    chosen: list[int] = []
    for i in order:
        if not blocked[i]:
            chosen.append(int(i))
            blocked |= dmat[i] < eps
    return chosen


def _greedy_cover(dmat: np.ndarray, eps: float) -> list[int]:
    """Lazy-evaluation greedy set cover over eps-balls centered at cloud points."""
    n = dmat.shape[0]
    uncovered = np.ones(n, dtype=bool)
    counts = (dmat < eps).sum(axis=1)
    heap = [(-int(c), i) for i, c in enumerate(counts)]
    heapq.heapify(heap)
    chosen: list[int] = []
    remaining = n
    while remaining > 0:
        negc, i = heapq.heappop(heap)
        ball = dmat[i] < eps
        now = int(np.count_nonzero(uncovered & ball))
        if now == 0:
            continue
        if now < -negc:
            heapq.heappush(heap, (-now, i))
            continue
        chosen.append(i)
        uncovered &= ~ball
        remaining -= now
    return chosen


# ---------------------------------------------------------------------------
# exact counting (branch and bound, bitmask sets)


def _conflict_masks(dmat: np.ndarray, eps: float) -> list[int]:
    n = dmat.shape[0]
    masks = []
    for i in range(n):
        row = dmat[i] < eps
        row[i] = False
        m = 0
        for j in np.flatnonzero(row):
            m |= 1 << int(j)
        masks.append(m)
    return masks


def _exact_max_separated(dmat: np.ndarray, eps: float) -> list[int]:
    n = dmat.shape[0]
    if n > EXACT_CAP:
        raise TooLargeError(f"too-large: exact mode capped at {EXACT_CAP} points, got {n}")
    conflict = _conflict_masks(dmat, eps)
    full = (1 << n) - 1

    best_size = 0
    best_mask = 0

    def grab(avail: int, cur_mask: int, cur_size: int) -> None:
        nonlocal best_size, best_mask
        if avail == 0:
            if cur_size > best_size:
                best_size, best_mask = cur_size, cur_mask
            return
        if cur_size + avail.bit_count() <= best_size:
            return
        # pivot on the most conflicted available vertex to prune fast
        v, vdeg = -1, -1
        m = avail
        while m:
            b = m & -m
            i = b.bit_length() - 1
            deg = (conflict[i] & avail).bit_count()
            if deg > vdeg:
                v, vdeg = i, deg
            m ^= b
        bit = 1 << v
        grab(avail & ~(conflict[v] | bit), cur_mask | bit, cur_size + 1)
        grab(avail & ~bit, cur_mask, cur_size)

    grab(full, 0, 0)
    return [i for i in range(n) if best_mask >> i & 1]


def _exact_min_spanning(dmat: np.ndarray, eps: float) -> list[int]:
    n = dmat.shape[0]
    if n > EXACT_CAP:
        raise TooLargeError(f"too-large: exact mode capped at {EXACT_CAP} points, got {n}")
    cover = []
    for i in range(n):
        m = 0
        for j in np.flatnonzero(dmat[i] < eps):
            m |= 1 << int(j)
        cover.append(m)
    full = (1 << n) - 1

    best: list[int] = _greedy_cover(dmat, eps)
    best_size = len(best)

    def search(uncov: int, chosen: list[int]) -> None:
        nonlocal best, best_size
        if uncov == 0:
            if len(chosen) < best_size:
                best, best_size = list(chosen), len(chosen)
            return
        widths = [(cover[i] & uncov).bit_count() for i in range(n)]
        widest = max(widths)
        need = math.ceil(uncov.bit_count() / widest)
        if len(chosen) + need >= best_size:
            return
        # branch on the hardest-to-cover uncovered element
        e, e_opts = -1, n + 1
        m = uncov
        while m:
            b = m & -m
            j = b.bit_length() - 1
            opts = sum(1 for i in range(n) if cover[i] >> j & 1)
            if opts < e_opts:
                e, e_opts = j, opts
            m ^= b
        cands = [i for i in range(n) if cover[i] >> e & 1]
        cands.sort(key=lambda i: (-widths[i], i))
        for i in cands:
            chosen.append(i)
            search(uncov & ~cover[i], chosen)
            chosen.pop()

    search(full, [])
    return sorted(best)


# ---------------------------------------------------------------------------
# public counting API


@dataclass(frozen=True)
class SeparationResult:
    count: int
    witness: tuple[int, ...]
    mode: str


def _check_eps_mode(eps: float, mode: str) -> None:
    if not eps > 0:
        raise ConfigError("config: eps must be > 0")
    if mode not in ("greedy", "exact"):
        raise ConfigError(f"config: unknown mode {mode!r}")


def counts_from_matrix(
    dmat: np.ndarray,
    eps: float,
    mode: str,
    order: np.ndarray | None = None,
) -> tuple[SeparationResult, SeparationResult]:
    """Separated and spanning counts from a precomputed distance matrix.

    Greedy spanning returns the smaller of the lazy set-cover witness and the
    maximal separated witness (which always spans), so ``span <= sep`` holds
    row by row in greedy mode as well as exact.
    """
    _check_eps_mode(eps, mode)
    if mode == "exact":
        sep = _exact_max_separated(dmat, eps)
        span = _exact_min_spanning(dmat, eps)
    else:
        if order is None:
            order = farthest_point_order(dmat, dmat.mean(axis=1))
        sep = _greedy_separated(dmat, order, eps)
        span = _greedy_cover(dmat, eps)
        if len(span) > len(sep):
            span = sep
    return (
        SeparationResult(len(sep), tuple(sep), mode),
        SeparationResult(len(span), tuple(span), mode),
    )


def _cloud_matrix_and_order(
    cloud: PointCloud, spec: MetricSpec
) -> tuple[np.ndarray, np.ndarray]:
    dmat = distance_matrix(cloud.points, cloud.points, spec)
    centroid = cloud.points.mean(axis=0)
    seed = distance_matrix(cloud.points, centroid[None, :], spec)[:, 0]
    return dmat, farthest_point_order(dmat, seed)


def max_separated(
    cloud: PointCloud, spec: MetricSpec, eps: float, mode: str = "greedy"
) -> SeparationResult:
    """Size and witness of an eps-separated subset (pairwise ``d >= eps``).

    Exact mode returns the true maximum; greedy returns a maximal set built
    in farthest-point order, so its witness also eps-spans the cloud.
    """
    _check_eps_mode(eps, mode)
    dmat, order = _cloud_matrix_and_order(cloud, spec)
    if mode == "exact":
        chosen = _exact_max_separated(dmat, eps)
    else:
        chosen = _greedy_separated(dmat, order, eps)
    return SeparationResult(len(chosen), tuple(chosen), mode)


def min_spanning(
    cloud: PointCloud, spec: MetricSpec, eps: float, mode: str = "greedy"
) -> SeparationResult:
    """Size and witness of an eps-spanning subset (every point within ``d < eps``).

    Witness points are cloud points.  Exact mode solves the covering problem
    outright; greedy takes the smaller of lazy set cover and the maximal
    separated witness.
    """
    _check_eps_mode(eps, mode)
    dmat, order = _cloud_matrix_and_order(cloud, spec)
    _, span_res = counts_from_matrix(dmat, eps, mode, order=order)
    return span_res


# ---------------------------------------------------------------------------
# count tables


@dataclass(frozen=True)
class CountRow:
    epsilon: float
    n: int
    sep_count: int
    span_count: int
    mode: str


@dataclass(frozen=True)
class CountTable:
    """Separated/spanning counts over an (epsilon, n) grid for one system run."""

    rows: tuple[CountRow, ...]
    cloud_size: int
    truncated_at: int | None = None
    notes: tuple[str, ...] = ()

    def eps_values(self) -> list[float]:
        seen: list[float] = []
        for r in self.rows:
            if r.epsilon not in seen:
                seen.append(r.epsilon)
        return seen

    def counts_for(self, eps: float, which: str = "sep") -> list[tuple[int, int]]:
        """(n, count) pairs for one epsilon, ascending in n."""
        pick = (lambda r: r.sep_count) if which == "sep" else (lambda r: r.span_count)
        rows = [(r.n, pick(r)) for r in self.rows if r.epsilon == eps]
        return sorted(rows)


def validate_count_table(table: CountTable) -> list[str]:
    """Invariant violations, empty when clean.

    Monotonicity in eps/n and the half-scale sandwich are theorems for exact
    counts; greedy counts are only required to keep ``span <= sep`` per row.
    """
    bad: list[str] = []
    for r in table.rows:
        if r.sep_count < 1 or r.span_count < 1:
            bad.append(f"counts below 1 at (eps={r.epsilon}, n={r.n})")
        if r.span_count > r.sep_count:
            bad.append(f"span > sep at (eps={r.epsilon}, n={r.n})")
    exact = [r for r in table.rows if r.mode == "exact"]
    by_key = {(r.epsilon, r.n): r for r in exact}
    for r in exact:
        twin = by_key.get((r.epsilon / 2, r.n))
        if twin is not None and r.sep_count > twin.span_count:
            bad.append(f"sandwich fails at (eps={r.epsilon}, n={r.n})")
        for q in exact:
            if q.n == r.n and q.epsilon < r.epsilon and q.sep_count < r.sep_count:
                bad.append(
                    f"sep not nonincreasing in eps at n={r.n}: "
                    f"{r.epsilon}->{q.epsilon}"
                )
            if q.epsilon == r.epsilon and q.n > r.n and q.sep_count < r.sep_count:
                bad.append(
                    f"sep not nondecreasing in n at eps={r.epsilon}: {r.n}->{q.n}"
                )
    return bad


# ---------------------------------------------------------------------------
# subsampling and serialization


def dense_subsample(cloud: PointCloud, keep_fraction: float, seed: int) -> PointCloud:
    """Random subsample that reports its achieved density.

    The returned mesh is the parent mesh plus the covering radius of the kept
    set within the parent, i.e. an honest density claim for the underlying
    space.  ``keep_fraction=1`` returns the cloud unchanged.
    """
    if not 0 < keep_fraction <= 1:
        raise ConfigError("config: keep_fraction must be in (0, 1]")
    if keep_fraction == 1:
        return cloud
    rng = np.random.default_rng(seed)
    k = max(1, math.ceil(keep_fraction * cloud.size))
    idx = np.sort(rng.choice(cloud.size, size=k, replace=False))
    kept = cloud.points[idx]
    radius = float(cdist(cloud.points, kept).min(axis=1).max())
    return PointCloud(kept.copy(), cloud.mesh + radius, f"{cloud.label}|subsample")


@dataclass(frozen=True)
class SubsampleCountReport:
    """Count inequalities between a cloud and a dense subsample of it.

    With the subsample delta-dense in the parent, nudging a witness onto the
    subsample costs at most 2*delta of scale: separated counts survive at
    eps - 2*delta and spanning counts at eps + 2*delta.  Exact counts only;
    greedy ones cannot certify an inequality.
    """

    covering_radius: float
    eps: float
    eps_sep: float
    eps_span: float
    sep_parent: int
    sep_sub: int
    span_parent: int
    span_sub: int

    @property
    def passed(self) -> bool:
        return self.sep_sub >= self.sep_parent and self.span_sub <= self.span_parent


def subsample_count_check(
    cloud: PointCloud,
    spec: MetricSpec,
    eps: float,
    keep_fraction: float,
    seed: int,
    margin: float = 1e-9,
) -> SubsampleCountReport:
    """Verify the density-shifted count inequalities on one subsample draw."""
    if cloud.size > EXACT_CAP:
        raise TooLargeError(
            f"too-large: subsample check needs exact counts, cap {EXACT_CAP}, got {cloud.size}"
        )
    if not eps > 0:
        raise ConfigError("config: eps must be > 0")
    sub = dense_subsample(cloud, keep_fraction, seed)
    radius = float(cdist(cloud.points, sub.points).min(axis=1).max())
    eps_sep = eps - 2 * radius - margin
    if eps_sep <= 0:
        raise ConfigError(
            f"config: subsample too sparse for eps={eps:g} (covering radius {radius:g})"
        )
    eps_span = eps + 2 * radius + margin
    sep_parent = max_separated(cloud, spec, eps, mode="exact").count
    span_parent = min_spanning(cloud, spec, eps, mode="exact").count
    sep_sub = max_separated(sub, spec, eps_sep, mode="exact").count
    span_sub = min_spanning(sub, spec, eps_span, mode="exact").count
    return SubsampleCountReport(
        covering_radius=radius,
        eps=eps,
        eps_sep=eps_sep,
        eps_span=eps_span,
        sep_parent=sep_parent,
        sep_sub=sep_sub,
        span_parent=span_parent,
        span_sub=span_sub,
    )


def save_cloud_csv(cloud: PointCloud, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(cloud.dim)])
        for row in cloud.points:
            writer.writerow([repr(float(v)) for v in row])


def load_cloud_csv(path: str, mesh: float, label: str = "") -> PointCloud:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or not all(h.startswith("x") for h in header):
            raise ConfigError(f"config: {path} lacks an x0..x(d-1) header row")
        pts = [[float(v) for v in row] for row in reader if row]
    return PointCloud(np.asarray(pts, dtype=float), mesh, label)


def save_count_table_csv(table: CountTable, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# cloud_size={table.cloud_size}\n")
        fh.write(f"# truncated_at={table.truncated_at}\n")
        for note in table.notes:
            fh.write(f"# note={note}\n")
        writer = csv.writer(fh)
        writer.writerow(["epsilon", "n", "sep", "span", "mode"])
        for r in table.rows:
            writer.writerow([repr(r.epsilon), r.n, r.sep_count, r.span_count, r.mode])


def load_count_table_csv(path: str) -> CountTable:
    cloud_size = 0
    truncated_at: int | None = None
    notes: list[str] = []
    rows: list[CountRow] = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# cloud_size="):
                cloud_size = int(line.split("=", 1)[1])
            elif line.startswith("# truncated_at="):
                val = line.split("=", 1)[1]
                truncated_at = None if val == "None" else int(val)
            elif line.startswith("# note="):
                notes.append(line.split("=", 1)[1])
            elif line.startswith("epsilon,"):
                continue
            elif line:
                eps_s, n_s, sep_s, span_s, mode = line.split(",")
                rows.append(
                    CountRow(float(eps_s), int(n_s), int(sep_s), int(span_s), mode)
                )
    return CountTable(tuple(rows), cloud_size, truncated_at, tuple(notes))
