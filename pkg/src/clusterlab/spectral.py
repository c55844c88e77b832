"""Affinity matrices, the unnormalized graph Laplacian, a cyclic Jacobi
eigensolver, and spectral embedding/clustering on the smallest eigenvectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dataset import Dataset
from .errors import KOutOfRange, NoConvergence, NonPositiveSigma
from .metrics import CondensedDistances, pairwise
from .neighbors import knn_neighbors, symmetrize_knn


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray       # ascending
    vectors: np.ndarray      # orthonormal columns, vectors[:, i] <-> values[i]


def knn_affinity(
    distances: CondensedDistances, k: int, mode: str = "union"
) -> np.ndarray:
    """Binary affinity: 1 for pairs passing the k-nearest symmetrization."""
    n = distances.n
    if not 1 <= k <= n - 1:
        raise KOutOfRange(f"k={k} outside [1, {n - 1}]")
    table = knn_neighbors(distances, k)
    s = np.zeros((n, n))
    for i, j in symmetrize_knn(table, mode):
        s[i, j] = s[j, i] = 1.0
    return s


def gaussian_affinity(distances: CondensedDistances, sigma: float) -> np.ndarray:
    """S_ij = exp(-d_ij^2 / (2 sigma^2)) with a zero diagonal."""
    if sigma <= 0:
        raise NonPositiveSigma(f"sigma={sigma}")
    square = distances.to_square()
    s = np.exp(-(square**2) / (2.0 * sigma**2))
    np.fill_diagonal(s, 0.0)
    return s


def laplacian(affinity: np.ndarray) -> np.ndarray:
    """L = D - S with D the diagonal degree matrix; rows sum to zero."""
    s = np.asarray(affinity, dtype=float)
    if s.shape[0] != s.shape[1] or not np.allclose(s, s.T, atol=1e-9):
        raise ValueError("affinity must be square and symmetric")
    return np.diag(s.sum(axis=1)) - s


def symmetric_eigen(
    a: np.ndarray, tol: float = 1e-8, max_sweeps: int = 100
) -> EigenSystem:
    """Cyclic Jacobi rotations (row-major upper-triangle sweeps).

    Stops once the largest off-diagonal row sum is below tol, which bounds
    the residual of every eigenpair by tol.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or np.abs(a - a.T).max() > 1e-9:
        raise ValueError("matrix must be symmetric within 1e-9")
    a = 0.5 * (a + a.T)  # exact symmetry for a clean invariant
    v = np.eye(n)
    scale = max(1.0, np.abs(a).max())
    skip = tol * scale / max(n * 10, 1)
    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a))).sum(axis=1).max()
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta**2 + 1.0))
                if theta == 0:
                    t = 1.0
                c = 1.0 / np.sqrt(t**2 + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise NoConvergence(f"no convergence after {max_sweeps} sweeps")
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    # sign convention: the largest-magnitude entry of each column is positive
    for i in range(n):
        col = vectors[:, i]
        if col[int(np.argmax(np.abs(col)))] < 0:
            vectors[:, i] = -col
    return EigenSystem(values, vectors)


def spectral_embed(affinity: np.ndarray, k: int, tol: float = 1e-8) -> np.ndarray:
    """Columns are the eigenvectors of L for the k smallest eigenvalues."""
    n = affinity.shape[0]
    if not 1 <= k <= n:
        raise KOutOfRange(f"k={k} outside [1, {n}]")
    system = symmetric_eigen(laplacian(affinity), tol=tol)
    return system.vectors[:, :k].copy()


def spectral_cluster(
    dataset: Dataset,
    n_clusters: int,
    affinity: str = "knn",
    k: Optional[int] = None,
    mode: str = "union",
    sigma: Optional[float] = None,
    metric: str = "euclidean",
    kmeans_params: Optional[dict] = None,
) -> np.ndarray:
    """k-means on the n_clusters-dimensional spectral embedding (all
    eigenvectors kept, including the constant one)."""
    from .prototypes import kmeans as run_kmeans

    distances = pairwise(dataset, metric)
    if affinity == "knn":
        if k is None:
            raise KOutOfRange("knn affinity needs k")
        s = knn_affinity(distances, k, mode)
    elif affinity == "gaussian":
        if sigma is None:
            raise NonPositiveSigma("gaussian affinity needs sigma")
        s = gaussian_affinity(distances, sigma)
    else:
        raise ValueError(f"unknown affinity {affinity!r}")
    embedding = spectral_embed(s, n_clusters)
    params = {"n_restarts": 10, "seed": 0}
    params.update(kmeans_params or {})
    model = run_kmeans(
        Dataset(embedding, tuple(f"e{i}" for i in range(n_clusters))),
        n_clusters,
        **params,
    )
    return model.labels
