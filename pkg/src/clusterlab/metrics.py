"""Distance functions and the condensed pairwise-distance matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .dataset import Dataset
from .errors import DimensionMismatch


@dataclass(frozen=True)
class CondensedDistances:
    """Upper triangle of a symmetric distance matrix, (n^2 - n) / 2 values.

    Entry (i, j) for i < j sits at index n*i - i*(i+1)//2 + (j - i - 1),
    row-major over the upper triangle.
    """

    n: int
    values: np.ndarray

    def __post_init__(self):
        expected = self.n * (self.n - 1) // 2
        if self.values.shape != (expected,):
            raise DimensionMismatch(
                f"expected {expected} condensed values for n={self.n}, "
                f"got {self.values.shape}"
            )

    def index(self, i: int, j: int) -> int:
        if i == j:
            raise IndexError("diagonal is implicit")
        if i > j:
            i, j = j, i
        return self.n * i - i * (i + 1) // 2 + (j - i - 1)

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        return float(self.values[self.index(i, j)])

    def to_square(self) -> np.ndarray:
        square = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, k=1)
        square[iu] = self.values
        square[(iu[1], iu[0])] = self.values
        return square

    @classmethod
    def from_square(cls, square: np.ndarray) -> "CondensedDistances":
        square = np.asarray(square, dtype=float)
        n = square.shape[0]
        return cls(n, square[np.triu_indices(n, k=1)])


def _check_pair(a, b, numeric: bool = True):
    a = np.asarray(a, dtype=float) if numeric else np.asarray(a)
    b = np.asarray(b, dtype=float) if numeric else np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return a, b


def euclidean(a, b) -> float:
    a, b = _check_pair(a, b)
    return float(np.sqrt(np.sum((a - b) ** 2)))


def squared_euclidean(a, b) -> float:
    a, b = _check_pair(a, b)
    return float(np.sum((a - b) ** 2))


def manhattan(a, b) -> float:
    a, b = _check_pair(a, b)
    return float(np.sum(np.abs(a - b)))


def hamming(a, b) -> int:
    """Count of differing positions; also works on non-numeric vectors."""
    a, b = _check_pair(a, b, numeric=False)
    return int(np.sum(a != b))


METRICS: dict[str, Callable] = {
    "euclidean": euclidean,
    "squared_euclidean": squared_euclidean,
    "manhattan": manhattan,
    "hamming": hamming,
}


def pairwise(
    dataset: Union[Dataset, np.ndarray],
    metric: Union[str, Callable] = "euclidean",
) -> CondensedDistances:
    """All pairwise distances, condensed upper-triangle layout."""
    points = dataset.points if isinstance(dataset, Dataset) else np.asarray(dataset)
    n = points.shape[0]
    if isinstance(metric, str):
        name = metric
        if name not in METRICS:
            raise DimensionMismatch(
                f"unknown metric {name!r}; choose from {sorted(METRICS)}"
            )
    else:
        name = None
    iu, ju = np.triu_indices(n, k=1)
    if name == "euclidean":
        values = np.sqrt(((points[iu] - points[ju]) ** 2).sum(axis=1))
    elif name == "squared_euclidean":
        values = ((points[iu] - points[ju]) ** 2).sum(axis=1)
    elif name == "manhattan":
        values = np.abs(points[iu] - points[ju]).sum(axis=1)
    elif name == "hamming":
        values = (points[iu] != points[ju]).sum(axis=1).astype(float)
    else:
        fn = metric
        values = np.fromiter(
            (fn(points[i], points[j]) for i, j in zip(iu, ju)),
            dtype=float,
            count=len(iu),
        )
    return CondensedDistances(n, values)
