"""Density-based clustering: grid histograms, DBSCAN, mutual reachability,
shared-neighbor similarities (Jarvis-Patrick / common-nearest-neighbor),
and a 1-D analytic level-set oracle."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dataset import Dataset, canonicalize_labels
from .errors import (
    DimensionUnsupported,
    InvalidMixture,
    KindMismatch,
    NOutOfRange,
)
from .hierarchy import MergeHierarchy, _components_after, _forest_hierarchy, _noise_filter
from .metrics import CondensedDistances
from .neighbors import KNEAREST, RADIUS, NeighborTable


@dataclass(frozen=True)
class GridHistogram:
    """Regular binning of a 1-D or 2-D dataset with per-point cell ids."""

    low: np.ndarray
    high: np.ndarray
    n_bins: np.ndarray
    eps: np.ndarray
    counts: dict[tuple[int, ...], int]
    point_cells: np.ndarray  # (n, dims) int

    @property
    def dims(self) -> int:
        return len(self.n_bins)


@dataclass(frozen=True)
class WeightedEdgeSet:
    """Undirected weighted edges over point ids 0..n-1; no self loops."""

    n: int
    edges: np.ndarray  # (E, 3) float: i, j, weight with i < j

    def filtered(self, min_weight: float) -> np.ndarray:
        if not len(self.edges):
            return self.edges
        return self.edges[self.edges[:, 2] >= min_weight]

    def to_json_dict(self) -> dict:
        return {"edges": [[int(i), int(j), float(w)] for i, j, w in self.edges]}


@dataclass(frozen=True)
class GaussianMixture1D:
    weights: np.ndarray
    means: np.ndarray
    sds: np.ndarray

    def __post_init__(self):
        w, m, s = map(np.asarray, (self.weights, self.means, self.sds))
        if not (len(w) == len(m) == len(s)) or len(w) == 0:
            raise InvalidMixture("weights, means, sds must have equal length >= 1")
        if np.any(w <= 0) or np.any(s <= 0):
            raise InvalidMixture("weights and sds must be positive")
        if abs(w.sum() - 1.0) > 1e-9:
            raise InvalidMixture(f"weights sum to {w.sum()}, not 1")

    def pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x, dtype=float)
        for w, m, s in zip(self.weights, self.means, self.sds):
            out += w * np.exp(-0.5 * ((x - m) / s) ** 2) / (s * math.sqrt(2 * math.pi))
        return out


# -- grid histograms -----------------------------------------------------------


def build_grid(
    dataset: Dataset,
    n_bins: Optional[Sequence[int] | int] = None,
    eps: Optional[Sequence[float] | float] = None,
) -> GridHistogram:
    """Histogram the points on a regular grid. Bounds default to the data
    range per dimension; the upper edge is inclusive (last bin)."""
    x = dataset.points
    dims = x.shape[1]
    if dims > 2:
        raise DimensionUnsupported(f"grid clustering supports <= 2 dims, got {dims}")
    low = x.min(axis=0)
    high = x.max(axis=0)
    span = high - low
    if n_bins is not None:
        nb = np.broadcast_to(np.asarray(n_bins, dtype=int), (dims,)).copy()
        if np.any(nb < 1):
            raise ValueError("n_bins must be >= 1")
        width = np.where(span > 0, span / nb, 1.0)
    elif eps is not None:
        width = np.broadcast_to(np.asarray(eps, dtype=float), (dims,)).copy()
        if np.any(width <= 0):
            raise ValueError("eps must be > 0")
        nb = np.maximum(np.ceil(span / width), 1).astype(int)
    else:
        raise ValueError("give n_bins or eps")
    cells = np.floor((x - low) / width).astype(int)
    cells = np.clip(cells, 0, nb - 1)  # points on the upper edge -> last bin
    counts: dict[tuple[int, ...], int] = {}
    for c in map(tuple, cells):
        counts[c] = counts.get(c, 0) + 1
    return GridHistogram(low, high, nb, width, counts, cells)


def _adjacent_dense_pairs(cells: list[tuple[int, ...]]) -> list[tuple[int, int]]:
    """Index pairs of face-adjacent cells (von Neumann neighborhood)."""
    index = {c: i for i, c in enumerate(cells)}
    pairs = []
    for c, i in index.items():
        for d in range(len(c)):
            nbr = list(c)
            nbr[d] += 1
            j = index.get(tuple(nbr))
            if j is not None:
                pairs.append((min(i, j), max(i, j)))
    return pairs


def grid_threshold_cluster(grid: GridHistogram, min_count: int) -> np.ndarray:
    """Dense cells (count >= min_count) connected over shared faces form
    the clusters; points in non-dense cells are noise."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    dense = sorted(c for c, k in grid.counts.items() if k >= min_count)
    if not dense:
        return np.zeros(len(grid.point_cells), dtype=int)
    from .hierarchy import _UnionFind

    uf = _UnionFind(len(dense))
    for i, j in _adjacent_dense_pairs(dense):
        uf.union(i, j)
    component_of = {c: uf.find(i) for i, c in enumerate(dense)}
    raw = np.zeros(len(grid.point_cells), dtype=int)
    remap: dict[int, int] = {}
    for idx, c in enumerate(map(tuple, grid.point_cells)):
        root = component_of.get(c)
        if root is None:
            continue
        raw[idx] = remap.setdefault(root, len(remap) + 1)
    return canonicalize_labels(raw)


def grid_hierarchy(grid: GridHistogram) -> MergeHierarchy:
    """Merge tree over nonempty cells: adjacent cells connect with weight
    min(count_a, count_b); densest connections merge first."""
    cells = sorted(grid.counts)
    if len(cells) < 2:
        raise ValueError("need at least 2 nonempty cells")
    pairs = _adjacent_dense_pairs(cells)
    edges = np.array(
        [
            (i, j, min(grid.counts[cells[i]], grid.counts[cells[j]]))
            for i, j in pairs
        ],
        dtype=float,
    ).reshape(-1, 3)
    return _forest_hierarchy(len(cells), edges, descending=True)


# -- DBSCAN --------------------------------------------------------------------


def core_points(table: NeighborTable, n_c: int) -> np.ndarray:
    """Mask of points with at least n_c neighbors (self excluded)."""
    if table.kind != RADIUS:
        raise KindMismatch(f"need a radius table, got {table.kind!r}")
    return table.counts(exclude_self=True) >= n_c


def dbscan(
    table: NeighborTable,
    n_c: int,
    border_policy: str = "first_core",
    min_cluster_size: int = 1,
) -> np.ndarray:
    """Label propagation over core points in ascending index order.

    Non-core neighbors join the first cluster that reaches them under
    ``first_core`` or stay noise under ``noise``. Clusters smaller than
    min_cluster_size are demoted to noise (1 = keep everything).
    """
    if border_policy not in ("first_core", "noise"):
        raise ValueError(f"border_policy must be first_core or noise, got {border_policy!r}")
    core = core_points(table, n_c)
    n = table.n
    labels = np.zeros(n, dtype=int)
    clabel = 0
    for start in range(n):
        if not core[start] or labels[start]:
            continue
        clabel += 1
        labels[start] = clabel
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for q in table.lists[p]:
                q = int(q)
                if q == p or labels[q]:
                    continue
                if core[q]:
                    labels[q] = clabel
                    queue.append(q)
                elif border_policy == "first_core":
                    labels[q] = clabel
    if min_cluster_size > 1:
        vals, counts = np.unique(labels[labels > 0], return_counts=True)
        drop = set(vals[counts < min_cluster_size])
        if drop:
            labels = np.array([0 if l in drop else l for l in labels])
            labels = canonicalize_labels(labels)
    return labels


def mutual_reachability(distances: CondensedDistances, n_c: int) -> CondensedDistances:
    """max(core distance of a, core distance of b, d(a, b)) where the core
    distance is the distance to the n_c-th nearest other point."""
    n = distances.n
    if not 1 <= n_c <= n - 1:
        raise NOutOfRange(f"n_c={n_c} outside [1, {n - 1}]")
    square = distances.to_square()
    d = square.copy()
    np.fill_diagonal(d, np.inf)
    core = np.partition(d, n_c - 1, axis=1)[:, n_c - 1]
    mr = np.maximum(np.maximum.outer(core, core), square)
    np.fill_diagonal(mr, 0.0)
    return CondensedDistances.from_square(mr)


# -- shared-neighbor similarities ------------------------------------------------


def snn_similarity(table: NeighborTable, require_mutual: bool = True) -> WeightedEdgeSet:
    """Shared k-nearest-neighbor counts (third points only).

    Edges exist for pairs that are k-nearest neighbors of each other
    (require_mutual) or of at least one side (union).
    """
    if table.kind != KNEAREST:
        raise KindMismatch(f"need a knearest table, got {table.kind!r}")
    sets = table.sets()
    pairs: set[tuple[int, int]] = set()
    for i in range(table.n):
        for j in sets[i]:
            if not require_mutual or i in sets[j]:
                pairs.add((i, j) if i < j else (j, i))
    edges = []
    for i, j in sorted(pairs):
        shared = (sets[i] & sets[j]) - {i, j}
        edges.append((i, j, len(shared)))
    return WeightedEdgeSet(table.n, np.array(edges, dtype=float).reshape(-1, 3))


def commonnn_similarity(table: NeighborTable, count_self: bool = False) -> WeightedEdgeSet:
    """Shared fixed-radius neighbor counts for pairs that are themselves
    neighbors (d <= r). With count_self each endpoint counts itself into
    its own neighborhood, adding 2 to every edge weight."""
    if table.kind != RADIUS:
        raise KindMismatch(f"need a radius table, got {table.kind!r}")
    sets = table.sets()
    offset = 2 if count_self else 0
    edges = []
    for i in range(table.n):
        for j in sorted(sets[i]):
            if j <= i:
                continue
            shared = sets[i] & sets[j]
            shared.discard(i)
            shared.discard(j)
            edges.append((i, j, len(shared) + offset))
    return WeightedEdgeSet(table.n, np.array(edges, dtype=float).reshape(-1, 3))


def shared_neighbor_cluster(edges: WeightedEdgeSet, n_c: int) -> np.ndarray:
    """Connected components over edges with weight >= n_c; single points
    are noise. Labels are canonical."""
    from .hierarchy import _UnionFind

    uf = _UnionFind(edges.n)
    for i, j, _ in edges.filtered(n_c):
        uf.union(int(i), int(j))
    roots = np.array([uf.find(i) for i in range(edges.n)])
    _, labels = np.unique(roots, return_inverse=True)
    return _noise_filter(labels + 1, min_size=2)


def shared_neighbor_hierarchy(edges: WeightedEdgeSet) -> MergeHierarchy:
    """Maximum spanning forest over similarity weights; merges run from the
    strongest connection down. Untouched points stay permanent singletons."""
    return _forest_hierarchy(edges.n, edges.edges, descending=True)


def shared_neighbor_cut(h: MergeHierarchy, n_c: float) -> np.ndarray:
    """Flat clustering from a similarity hierarchy: apply merges with
    weight >= n_c; singletons are noise. Equals shared_neighbor_cluster
    at the same threshold."""
    applied = int(np.sum(h.rows[:, 2] >= n_c)) if h.n_merges else 0
    labels = _components_after(h, applied)
    return _noise_filter(labels, min_size=2)


# -- 1-D level sets ---------------------------------------------------------------


def levelset_components_1d(
    mix: GaussianMixture1D,
    lam: float,
    domain: tuple[float, float],
    grid_n: int = 2000,
) -> list[tuple[float, float]]:
    """Maximal intervals of {x : density(x) >= lam} inside the domain.

    Crossings are located on a dense grid and refined by bisection to 1e-8.
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if grid_n < 1000:
        raise ValueError("grid_n must be >= 1000")
    lo, hi = domain
    xs = np.linspace(lo, hi, grid_n)
    above = mix.pdf(xs) >= lam

    def refine(a: float, b: float) -> float:
        # invariant: sign of (pdf - lam) differs between a and b
        fa = mix.pdf(np.array([a]))[0] >= lam
        for _ in range(200):
            m = 0.5 * (a + b)
            if b - a < 1e-8:
                break
            if (mix.pdf(np.array([m]))[0] >= lam) == fa:
                a = m
            else:
                b = m
        return 0.5 * (a + b)

    intervals = []
    start = None
    for t in range(grid_n):
        if above[t] and start is None:
            start = xs[t] if t == 0 else refine(xs[t - 1], xs[t])
        elif not above[t] and start is not None:
            intervals.append((start, refine(xs[t - 1], xs[t])))
            start = None
    if start is not None:
        intervals.append((start, xs[-1]))
    return intervals
