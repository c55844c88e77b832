"""Core data containers and the label conventions used everywhere else.

One convention holds across the toolkit: a label vector is an integer array
with 0 reserved for noise/unassigned points and clusters numbered 1..k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .errors import (
    LabelLengthMismatch,
    NonFiniteValue,
    RaggedRows,
    TooManyClustersForExactMatching,
)

MAX_EXACT_MATCH_CLUSTERS = 12


@dataclass(frozen=True)
class Dataset:
    """n x m feature matrix with names and optional ground-truth classes.

    Arrays are frozen on construction; operations share datasets freely
    across threads and always allocate new arrays for transformed points.
    """

    points: np.ndarray
    feature_names: tuple[str, ...]
    true_labels: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))
        self.points.setflags(write=False)
        if self.true_labels is not None:
            object.__setattr__(
                self, "true_labels", np.asarray(self.true_labels, dtype=int)
            )
            self.true_labels.setflags(write=False)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def m(self) -> int:
        return self.points.shape[1]

    def with_points(self, points: np.ndarray) -> "Dataset":
        return Dataset(points, self.feature_names, self.true_labels)


@dataclass(frozen=True)
class ClusteringResult:
    """Labels plus whatever a method produced along the way."""

    labels: np.ndarray
    method: str
    params: dict[str, Any] = field(default_factory=dict)
    artifacts: dict[str, Any] = field(default_factory=dict)


def make_dataset(
    rows: Sequence[Sequence[float]],
    feature_names: Optional[Sequence[str]] = None,
    true_labels: Optional[Sequence[int]] = None,
) -> Dataset:
    """Validate rectangular finite rows and wrap them as a Dataset."""
    rows = list(rows)
    if len(rows) == 0:
        raise RaggedRows("need at least one row")
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise RaggedRows(f"row lengths differ: {sorted(lengths)}")
    points = np.asarray(rows, dtype=float)
    if points.ndim != 2 or points.shape[1] == 0:
        raise RaggedRows("rows must be non-empty vectors")
    if not np.all(np.isfinite(points)):
        bad = np.argwhere(~np.isfinite(points))[0]
        raise NonFiniteValue(f"non-finite value at row {bad[0]}, column {bad[1]}")
    if feature_names is None:
        feature_names = tuple(f"f{j}" for j in range(points.shape[1]))
    else:
        feature_names = tuple(str(s) for s in feature_names)
        if len(feature_names) != points.shape[1]:
            raise LabelLengthMismatch(
                f"{len(feature_names)} feature names for {points.shape[1]} columns"
            )
    labels = None
    if true_labels is not None:
        labels = np.asarray(true_labels, dtype=int)
        if labels.shape != (points.shape[0],):
            raise LabelLengthMismatch(
                f"{labels.size} labels for {points.shape[0]} rows"
            )
        if np.any(labels < 1):
            raise LabelLengthMismatch("class labels must be >= 1")
        labels.setflags(write=False)
    points.setflags(write=False)
    return Dataset(points, feature_names, labels)


def n_clusters(labels: np.ndarray) -> int:
    """Number of distinct non-noise labels."""
    labels = np.asarray(labels)
    return int(np.unique(labels[labels > 0]).size)


def canonicalize_labels(labels: np.ndarray) -> np.ndarray:
    """Renumber clusters 1..k by decreasing size; ties by first member index.

    Noise (0) stays 0 and the partition is unchanged up to renaming.
    """
    labels = np.asarray(labels, dtype=int)
    if np.any(labels < 0):
        raise ValueError("labels must be >= 0")
    out = np.zeros_like(labels)
    values = np.unique(labels[labels > 0])
    order = sorted(
        values,
        key=lambda v: (-int(np.sum(labels == v)), int(np.argmax(labels == v))),
    )
    for new, old in enumerate(order, start=1):
        out[labels == old] = new
    return out


def _max_assignment(counts: np.ndarray) -> int:
    """Maximum total over injective row->column mappings (exact, subset DP)."""
    rows, cols = counts.shape
    if rows > cols:
        counts = counts.T
        rows, cols = cols, rows
    best = np.full(1 << cols, -1, dtype=np.int64)
    best[0] = 0
    for i in range(rows):
        nxt = np.full_like(best, -1)
        for mask in range(1 << cols):
            if best[mask] < 0:
                continue
            for j in range(cols):
                if mask >> j & 1:
                    continue
                v = best[mask] + counts[i, j]
                if v > nxt[mask | 1 << j]:
                    nxt[mask | 1 << j] = v
        best = nxt
    return int(best.max())


def match_percentage(
    pred: np.ndarray, truth: np.ndarray, ignore_noise: bool = False
) -> float:
    """Best fraction of agreeing labels over injective cluster->class mappings.

    Noise points (label 0 in ``pred``) count as mismatches; with
    ``ignore_noise`` they are dropped from numerator and denominator.
    """
    pred = np.asarray(pred, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred.shape != truth.shape:
        raise LabelLengthMismatch(f"{pred.size} predictions vs {truth.size} labels")
    if ignore_noise:
        keep = pred != 0
        pred, truth = pred[keep], truth[keep]
    if pred.size == 0:
        return 0.0
    pred_ids = np.unique(pred[pred > 0])
    if pred_ids.size > MAX_EXACT_MATCH_CLUSTERS:
        raise TooManyClustersForExactMatching(
            f"{pred_ids.size} clusters exceeds the exact-matching bound "
            f"of {MAX_EXACT_MATCH_CLUSTERS}"
        )
    truth_ids = np.unique(truth)
    counts = np.zeros((pred_ids.size, truth_ids.size), dtype=np.int64)
    pi = {v: i for i, v in enumerate(pred_ids)}
    ti = {v: i for i, v in enumerate(truth_ids)}
    for a, b in zip(pred, truth):
        if a != 0:
            counts[pi[a], ti[b]] += 1
    if counts.size == 0:
        return 0.0
    return _max_assignment(counts) / pred.size
