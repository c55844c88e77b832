"""Internal and external cluster validation indices.

External indices treat noise (label 0) as a regular extra cluster; all
entropies and mutual informations are in nats. The expected mutual
information uses the permutation (hypergeometric) model.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, log
from typing import Optional

import numpy as np

from .dataset import Dataset
from .errors import LengthMismatch, NoiseNotAllowed, SingleCluster
from .metrics import CondensedDistances


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray       # (r, c)
    row_values: np.ndarray
    col_values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def contingency(pred: np.ndarray, truth: np.ndarray) -> ContingencyTable:
    pred = np.asarray(pred, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred.shape != truth.shape:
        raise LengthMismatch(f"{pred.size} vs {truth.size}")
    rows, ri = np.unique(pred, return_inverse=True)
    cols, ci = np.unique(truth, return_inverse=True)
    counts = np.zeros((rows.size, cols.size), dtype=np.int64)
    np.add.at(counts, (ri, ci), 1)
    return ContingencyTable(counts, rows, cols)


# -- internal indices ---------------------------------------------------------


def inertia(
    dataset: Dataset, labels: np.ndarray, centroids: Optional[np.ndarray] = None
) -> float:
    """Total squared distance of points to their cluster centroid."""
    labels = np.asarray(labels, dtype=int)
    if np.any(labels == 0):
        raise NoiseNotAllowed("inertia is undefined with noise points")
    x = dataset.points
    total = 0.0
    for idx, value in enumerate(np.unique(labels)):
        members = x[labels == value]
        center = members.mean(axis=0) if centroids is None else centroids[idx]
        total += float(((members - center) ** 2).sum())
    return total


def silhouette(
    distances: CondensedDistances, labels: np.ndarray
) -> tuple[np.ndarray, float]:
    """Per-point silhouette scores and their mean.

    Noise points are excluded (NaN in the score array); singleton clusters
    score 0; the nearest cluster is the one at minimum mean distance.
    """
    labels = np.asarray(labels, dtype=int)
    square = distances.to_square()
    values = np.unique(labels[labels > 0])
    if values.size < 2:
        raise SingleCluster("silhouette needs at least 2 clusters")
    scores = np.full(labels.size, np.nan)
    members = {v: np.flatnonzero(labels == v) for v in values}
    for i in np.flatnonzero(labels > 0):
        own = members[labels[i]]
        if own.size == 1:
            scores[i] = 0.0
            continue
        a = square[i, own].sum() / (own.size - 1)
        b = min(
            square[i, members[v]].mean() for v in values if v != labels[i]
        )
        scores[i] = (b - a) / max(a, b)
    return scores, float(np.nanmean(scores))


def calinski_harabasz(dataset: Dataset, labels: np.ndarray) -> float:
    """Variance ratio: between-cluster over within-cluster scatter, scaled
    by (n - k) / (k - 1). Collapsed clusters (zero intra trace) give inf."""
    labels = np.asarray(labels, dtype=int)
    if np.any(labels == 0):
        raise NoiseNotAllowed("calinski_harabasz is undefined with noise points")
    x = dataset.points
    values = np.unique(labels)
    k, n = values.size, x.shape[0]
    if k < 2:
        raise SingleCluster("need at least 2 clusters")
    if k >= n:
        raise SingleCluster("need k < n")
    grand = x.mean(axis=0)
    intra = 0.0
    inter = 0.0
    for v in values:
        members = x[labels == v]
        mu = members.mean(axis=0)
        intra += float(((members - mu) ** 2).sum())
        inter += len(members) * float(((mu - grand) ** 2).sum())
    if intra == 0.0:
        return float("inf")
    return (inter / intra) * (n - k) / (k - 1)


# -- external indices -----------------------------------------------------------


def _entropy(marginals: np.ndarray, n: int) -> float:
    p = marginals[marginals > 0] / n
    return float(-(p * np.log(p)).sum())


def homogeneity_completeness_v(
    pred: np.ndarray, truth: np.ndarray
) -> tuple[float, float, float]:
    """Entropy-based h, c and their harmonic mean v."""
    table = contingency(pred, truth)
    n = table.n
    h_truth = _entropy(table.col_marginals, n)
    h_pred = _entropy(table.row_marginals, n)
    mi = mutual_information(table)
    h = 1.0 if h_truth == 0 else min(mi / h_truth, 1.0)
    c = 1.0 if h_pred == 0 else min(mi / h_pred, 1.0)
    v = 0.0 if h + c == 0 else 2 * h * c / (h + c)
    return h, c, v


def rand_ari(pred: np.ndarray, truth: np.ndarray) -> tuple[float, float]:
    """Plain Rand index and its chance-corrected (adjusted) version."""
    table = contingency(pred, truth)
    n = table.n
    if n < 2:
        return 1.0, 1.0

    def comb2(a):
        return a * (a - 1) / 2.0

    sum_ij = comb2(table.counts.astype(float)).sum()
    sum_a = comb2(table.row_marginals.astype(float)).sum()
    sum_b = comb2(table.col_marginals.astype(float)).sum()
    total = comb2(float(n))
    # pairs in the same cluster in both + pairs split in both
    agree = total + 2 * sum_ij - sum_a - sum_b
    rand = agree / total
    expected = sum_a * sum_b / total
    maximum = 0.5 * (sum_a + sum_b)
    if maximum == expected:
        return rand, 1.0
    ari = (sum_ij - expected) / (maximum - expected)
    return rand, float(ari)


def mutual_information(table: ContingencyTable) -> float:
    n = table.n
    mi = 0.0
    a = table.row_marginals
    b = table.col_marginals
    for i in range(table.counts.shape[0]):
        for j in range(table.counts.shape[1]):
            nij = table.counts[i, j]
            if nij:
                mi += (nij / n) * log(n * nij / (a[i] * b[j]))
    return max(mi, 0.0)


def expected_mutual_information(table: ContingencyTable) -> float:
    """E[MI] over random contingency tables with fixed marginals."""
    n = table.n
    a = table.row_marginals
    b = table.col_marginals
    emi = 0.0
    for ai in a:
        for bj in b:
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            for nij in range(lo, hi + 1):
                term = (nij / n) * log(n * nij / (ai * bj))
                logp = (
                    lgamma(ai + 1)
                    + lgamma(bj + 1)
                    + lgamma(n - ai + 1)
                    + lgamma(n - bj + 1)
                    - lgamma(n + 1)
                    - lgamma(nij + 1)
                    - lgamma(ai - nij + 1)
                    - lgamma(bj - nij + 1)
                    - lgamma(n - ai - bj + nij + 1)
                )
                emi += term * np.exp(logp)
    return emi


def mi_nmi_ami(
    pred: np.ndarray, truth: np.ndarray
) -> tuple[float, float, float]:
    """Mutual information, arithmetic-mean NMI, and adjusted MI."""
    table = contingency(pred, truth)
    n = table.n
    mi = mutual_information(table)
    h_pred = _entropy(table.row_marginals, n)
    h_truth = _entropy(table.col_marginals, n)
    mean_h = 0.5 * (h_pred + h_truth)
    if mean_h == 0:
        # both partitions trivial, hence identical
        return mi, 1.0, 1.0
    nmi = min(mi / mean_h, 1.0)
    emi = expected_mutual_information(table)
    denom = mean_h - emi
    if denom == 0:
        return mi, nmi, 1.0 if mi == emi else 0.0
    return mi, nmi, (mi - emi) / denom
