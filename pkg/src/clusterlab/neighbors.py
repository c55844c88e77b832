"""Fixed-radius and k-nearest neighborhoods over a condensed distance matrix.

Conventions fixed here: radius balls are closed (d <= r); for k-nearest
tables the k-th distance d_k is computed over *other* points, ties at d_k
are all included, and ``include_self`` only controls whether a point is
listed in its own neighborhood.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import KindMismatch, KOutOfRange, NegativeRadius
from .metrics import CondensedDistances

RADIUS = "radius"
KNEAREST = "knearest"


@dataclass(frozen=True)
class NeighborTable:
    kind: str
    param: float
    include_self: bool
    lists: tuple[np.ndarray, ...]
    kth_distance: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return len(self.lists)

    def counts(self, exclude_self: bool = True) -> np.ndarray:
        """Neighbor counts per point."""
        raw = np.array([len(lst) for lst in self.lists])
        if exclude_self and self.include_self:
            return raw - 1
        return raw

    def sets(self, strip_self: bool = True) -> list[set[int]]:
        out = [set(map(int, lst)) for lst in self.lists]
        if strip_self:
            for i, s in enumerate(out):
                s.discard(i)
        return out


def radius_neighbors(
    distances: CondensedDistances, r: float, include_self: bool = False
) -> NeighborTable:
    """Closed-ball neighborhoods: j is a neighbor of i iff d(i, j) <= r."""
    if r < 0:
        raise NegativeRadius(f"r={r}")
    square = distances.to_square()
    lists = []
    for i in range(distances.n):
        mask = square[i] <= r
        if not include_self:
            mask[i] = False
        lists.append(np.flatnonzero(mask))
    return NeighborTable(RADIUS, float(r), include_self, tuple(lists))


def knn_neighbors(
    distances: CondensedDistances, k: int, include_self: bool = False
) -> NeighborTable:
    """All points within the k-th nearest distance of each point.

    Lists may exceed k when several points tie at d_k.
    """
    n = distances.n
    if not 1 <= k <= n - 1:
        raise KOutOfRange(f"k={k} outside [1, {n - 1}]")
    square = distances.to_square()
    lists = []
    kth = np.empty(n)
    for i in range(n):
        d = square[i].copy()
        d[i] = np.inf
        kth[i] = np.partition(d, k - 1)[k - 1]
        mask = d <= kth[i]
        if include_self:
            mask[i] = True
        lists.append(np.flatnonzero(mask))
    kth.setflags(write=False)
    return NeighborTable(KNEAREST, int(k), include_self, tuple(lists), kth)


def to_adjacency(table: NeighborTable) -> np.ndarray:
    """Binary n x n matrix with entry (i, j) = 1 iff j in lists[i]."""
    n = table.n
    adj = np.zeros((n, n), dtype=np.uint8)
    for i, lst in enumerate(table.lists):
        adj[i, lst] = 1
    return adj


def symmetrize_knn(table: NeighborTable, mode: str = "union") -> set[tuple[int, int]]:
    """Undirected pairs from a k-nearest table.

    union keeps (i, j) if either point lists the other; mutual requires both.
    """
    if table.kind != KNEAREST:
        raise KindMismatch(f"need a knearest table, got {table.kind!r}")
    if mode not in ("union", "mutual"):
        raise ValueError(f"mode must be union or mutual, got {mode!r}")
    sets = table.sets()
    pairs: set[tuple[int, int]] = set()
    for i, neigh in enumerate(sets):
        for j in neigh:
            a, b = (i, j) if i < j else (j, i)
            if mode == "union" or i in sets[j]:
                pairs.add((a, b))
    return pairs
