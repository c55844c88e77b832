"""Agglomerative merge trees and their cuts.

The merge record follows the SciPy hierarchy layout: row t holds
(child a, child b, merge height, member count) and creates cluster id
n + t; leaves are 0..n-1. Forests (fewer than n-1 rows) are allowed so
that similarity graphs with isolated points keep permanent singletons.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .dataset import canonicalize_labels
from .errors import KOutOfRange, TooFewPoints
from .metrics import CondensedDistances

# Lance-Williams coefficients (alpha_a, alpha_b, beta, gamma); average linkage
# uses size-dependent alphas computed inline.
_LW = {
    "single": (0.5, 0.5, 0.0, -0.5),
    "complete": (0.5, 0.5, 0.0, 0.5),
    "average": None,
}


@dataclass(frozen=True)
class MergeHierarchy:
    n_leaves: int
    rows: np.ndarray  # (k, 4) float: a, b, height, size

    @property
    def n_merges(self) -> int:
        return self.rows.shape[0]

    @property
    def max_height(self) -> float:
        return float(self.rows[:, 2].max()) if self.n_merges else 0.0


@dataclass(frozen=True)
class SpanningTree:
    n: int
    edges: np.ndarray  # (n-1, 3) float: i, j, weight

    @property
    def total_weight(self) -> float:
        return float(self.edges[:, 2].sum())


@dataclass(frozen=True)
class CondensedTree:
    """Simplified merge tree: clusters survive only splits into two
    children of at least min_cluster_size members; everything else falls
    out as individual points at the lambda of the split."""

    n_points: int
    min_cluster_size: int
    parent: np.ndarray          # condensed cluster id
    child: np.ndarray           # cluster id or point index
    child_is_cluster: np.ndarray
    lam: np.ndarray
    size: np.ndarray

    @property
    def cluster_ids(self) -> np.ndarray:
        kids = self.child[self.child_is_cluster]
        return np.unique(np.concatenate([[0], kids])).astype(int)


def agglomerate(
    distances: CondensedDistances, linkage: str = "single"
) -> MergeHierarchy:
    """Matrix-based Lance-Williams agglomeration (O(n^3) reference path)."""
    if linkage not in _LW:
        raise ValueError(f"linkage must be one of {sorted(_LW)}, got {linkage!r}")
    n = distances.n
    if n < 2:
        raise TooFewPoints("need at least 2 points")
    d = distances.to_square()
    np.fill_diagonal(d, np.inf)
    active = np.ones(n, dtype=bool)
    ids = np.arange(n)
    sizes = np.ones(n, dtype=int)
    rows = np.empty((n - 1, 4))
    for t in range(n - 1):
        sub = np.where(active[:, None] & active[None, :], d, np.inf)
        mn = sub.min()
        cand = np.argwhere(sub == mn)
        cand = cand[cand[:, 0] < cand[:, 1]]
        # deterministic tie-break: smallest (id, id) pair
        key = sorted(
            (tuple(sorted((ids[i], ids[j]))), i, j) for i, j in cand
        )[0]
        _, si, sj = key
        ia, ib = sorted((ids[si], ids[sj]))
        size = sizes[si] + sizes[sj]
        rows[t] = (ia, ib, mn, size)
        # Lance-Williams update into slot si
        if linkage == "average":
            aa = sizes[si] / size
            ab = sizes[sj] / size
            beta = gamma = 0.0
        else:
            aa, ab, beta, gamma = _LW[linkage]
        others = active.copy()
        others[[si, sj]] = False
        upd = (
            aa * d[si, others]
            + ab * d[sj, others]
            + beta * mn
            + gamma * np.abs(d[si, others] - d[sj, others])
        )
        d[si, others] = upd
        d[others, si] = upd
        active[sj] = False
        ids[si] = n + t
        sizes[si] = size
    return MergeHierarchy(n, rows)


def minimum_spanning_tree(
    n: int, weight: Union[Callable[[int, int], float], CondensedDistances]
) -> SpanningTree:
    """Prim over the implicit complete graph; ties go to the smaller index."""
    if n < 2:
        raise TooFewPoints("need at least 2 vertices")
    if isinstance(weight, CondensedDistances):
        square = weight.to_square()
        row = lambda u: square[u]
    else:
        fn = weight
        row = lambda u: np.array([0.0 if v == u else fn(u, v) for v in range(n)])
    best = np.full(n, np.inf)
    parent = np.full(n, -1)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    w0 = row(0)
    for v in range(1, n):
        best[v], parent[v] = w0[v], 0
    edges = np.empty((n - 1, 3))
    for t in range(n - 1):
        masked = np.where(in_tree, np.inf, best)
        u = int(np.argmin(masked))  # first minimum = smallest index
        i, j = sorted((parent[u], u))
        edges[t] = (i, j, best[u])
        in_tree[u] = True
        wu = row(u)
        for v in np.flatnonzero(~in_tree):
            if wu[v] < best[v]:  # strict: keep earliest parent on ties
                best[v], parent[v] = wu[v], u
    return SpanningTree(n, edges)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _forest_hierarchy(
    n: int, edges: np.ndarray, descending: bool = False
) -> MergeHierarchy:
    """Union-find over sorted edges; heights are the edge weights."""
    if len(edges):
        order = np.lexsort((edges[:, 1], edges[:, 0],
                            -edges[:, 2] if descending else edges[:, 2]))
        edges = edges[order]
    uf = _UnionFind(n)
    cluster_of = list(range(n))
    sizes = [1] * n
    rows = []
    for i, j, w in edges:
        i, j = int(i), int(j)
        ri, rj = uf.find(i), uf.find(j)
        if ri == rj:
            continue
        new_id = n + len(rows)
        rows.append(
            (cluster_of[ri], cluster_of[rj], float(w), sizes[ri] + sizes[rj])
        )
        uf.union(ri, rj)
        root = uf.find(ri)
        cluster_of[root] = new_id
        sizes[root] = rows[-1][3]
    return MergeHierarchy(n, np.array(rows, dtype=float).reshape(-1, 4))


def single_linkage_from_mst(tree: SpanningTree) -> MergeHierarchy:
    """Replay tree edges in ascending weight order as single-linkage merges."""
    return _forest_hierarchy(tree.n, tree.edges, descending=False)


def _components_after(h: MergeHierarchy, n_applied: int) -> np.ndarray:
    uf = _UnionFind(h.n_leaves)
    leaves_of = {i: i for i in range(h.n_leaves)}  # cluster id -> any leaf
    for t in range(n_applied):
        a, b, _, _ = h.rows[t]
        la, lb = leaves_of[int(a)], leaves_of[int(b)]
        uf.union(la, lb)
        leaves_of[h.n_leaves + t] = uf.find(la)
    roots = np.array([uf.find(i) for i in range(h.n_leaves)])
    _, labels = np.unique(roots, return_inverse=True)
    return labels + 1


def cut_by_threshold(h: MergeHierarchy, t: float, min_size: int = 1) -> np.ndarray:
    """Apply every merge with height <= t (a prefix, since heights are
    non-decreasing for distance hierarchies); components smaller than
    min_size become noise. Labels are canonical."""
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    applied = int(np.sum(h.rows[:, 2] <= t)) if h.n_merges else 0
    labels = _components_after(h, applied)
    return _noise_filter(labels, min_size)


def _noise_filter(labels: np.ndarray, min_size: int) -> np.ndarray:
    if min_size > 1:
        vals, counts = np.unique(labels, return_counts=True)
        small = set(vals[counts < min_size])
        labels = np.array([0 if l in small else l for l in labels])
    return canonicalize_labels(labels)


def cut_by_count(h: MergeHierarchy, k: int) -> np.ndarray:
    """Stop after n - k merges, leaving exactly k clusters."""
    n = h.n_leaves
    if not 1 <= k <= n:
        raise KOutOfRange(f"k={k} outside [1, {n}]")
    if n - k > h.n_merges:
        raise KOutOfRange(
            f"hierarchy has only {h.n_merges} merges; cannot reach {k} clusters"
        )
    labels = _components_after(h, n - k)
    return canonicalize_labels(labels)


def condense(
    h: MergeHierarchy, min_cluster_size: int, heights_are_distances: bool = True
) -> CondensedTree:
    """Walk merges top-down keeping only splits where both children reach
    min_cluster_size; smaller children fall out point by point at the
    lambda of the split (lambda = 1/height for distance hierarchies)."""
    if min_cluster_size < 2:
        raise ValueError(f"min_cluster_size must be >= 2, got {min_cluster_size}")
    n = h.n_leaves
    if h.n_merges != n - 1:
        raise ValueError("condense needs a full hierarchy (n - 1 merges)")
    children = {
        n + t: (int(h.rows[t, 0]), int(h.rows[t, 1]), float(h.rows[t, 2]))
        for t in range(n - 1)
    }
    sizes = {i: 1 for i in range(n)}
    for t in range(n - 1):
        a, b, _ = children[n + t]
        sizes[n + t] = sizes[a] + sizes[b]
    root = 2 * n - 2

    def lam_of(height: float) -> float:
        if not heights_are_distances:
            return height
        return 1.0 / height if height > 0 else np.inf

    def leaves(node: int) -> list[int]:
        out, stack = [], [node]
        while stack:
            v = stack.pop()
            if v < n:
                out.append(v)
            else:
                a, b, _ = children[v]
                stack.extend((a, b))
        return out

    parent_col, child_col, is_cluster, lam_col, size_col = [], [], [], [], []

    def emit(parent: int, child: int, cluster: bool, lam: float, size: int):
        parent_col.append(parent)
        child_col.append(child)
        is_cluster.append(cluster)
        lam_col.append(lam)
        size_col.append(size)

    relabel = {root: 0}
    next_cluster = 1
    queue = deque([root])
    while queue:
        node = queue.popleft()
        if node < n:
            continue
        a, b, height = children[node]
        lam = lam_of(height)
        cl = relabel[node]
        big_a, big_b = sizes[a] >= min_cluster_size, sizes[b] >= min_cluster_size
        if big_a and big_b:
            for ch in (a, b):
                relabel[ch] = next_cluster
                emit(cl, next_cluster, True, lam, sizes[ch])
                next_cluster += 1
                queue.append(ch)
        elif big_a or big_b:
            big, small = (a, b) if big_a else (b, a)
            relabel[big] = cl
            queue.append(big)
            for p in leaves(small):
                emit(cl, p, False, lam, 1)
        else:
            for p in leaves(a) + leaves(b):
                emit(cl, p, False, lam, 1)
    return CondensedTree(
        n,
        min_cluster_size,
        np.array(parent_col, dtype=int),
        np.array(child_col, dtype=int),
        np.array(is_cluster, dtype=bool),
        np.array(lam_col, dtype=float),
        np.array(size_col, dtype=int),
    )


def cluster_stabilities(tree: CondensedTree) -> dict[int, float]:
    """Excess-of-mass stability: sum over departures of
    (lambda at departure - lambda at the cluster's birth) x size."""
    birth = {0: 0.0}
    for c, is_cl, lam in zip(tree.child, tree.child_is_cluster, tree.lam):
        if is_cl:
            birth[int(c)] = float(lam)
    stab = {c: 0.0 for c in birth}
    for p, lam, size in zip(tree.parent, tree.lam, tree.size):
        stab[int(p)] += (float(lam) - birth[int(p)]) * int(size)
    return stab


def select_by_persistence(tree: CondensedTree) -> np.ndarray:
    """Keep a parent only if its stability exceeds the sum of its selected
    children's; otherwise keep the children. The root is kept only when it
    is the sole cluster. Selected clusters get labels 1..k; fall-out points
    of unselected regions are noise."""
    stab = cluster_stabilities(tree)
    kids: dict[int, list[int]] = {c: [] for c in stab}
    for p, c, is_cl in zip(tree.parent, tree.child, tree.child_is_cluster):
        if is_cl:
            kids[int(p)].append(int(c))
    selected = {}
    effective = {}
    for c in sorted(stab, reverse=True):
        if not kids[c]:
            selected[c] = c != 0 or len(stab) == 1
            effective[c] = stab[c]
            continue
        subtree = sum(effective[x] for x in kids[c])
        if stab[c] > subtree and c != 0:
            selected[c] = True
            effective[c] = stab[c]
            stack = list(kids[c])
            while stack:
                v = stack.pop()
                selected[v] = False
                stack.extend(kids[v])
        else:
            selected[c] = False
            effective[c] = subtree
    chosen = sorted(c for c, keep in selected.items() if keep)
    label_of = {c: i + 1 for i, c in enumerate(chosen)}
    parent_of_cluster = {}
    for p, c, is_cl in zip(tree.parent, tree.child, tree.child_is_cluster):
        if is_cl:
            parent_of_cluster[int(c)] = int(p)
    labels = np.zeros(tree.n_points, dtype=int)
    for p, c, is_cl in zip(tree.parent, tree.child, tree.child_is_cluster):
        if is_cl:
            continue
        node = int(p)
        while node is not None and node not in label_of:
            node = parent_of_cluster.get(node)
        if node is not None:
            labels[int(c)] = label_of[node]
    return canonicalize_labels(labels)
