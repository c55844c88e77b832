"""Prototype-based methods: Lloyd k-means with k-means++ starts, Gaussian
mixture EM, and the density-peaks decision graph with manual selection.

Restart seeds derive deterministically from (seed, restart index), so the
best-of-restarts result is reproducible and restarts could run in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dataset import Dataset
from .errors import (
    ClusterlabError,
    DuplicateSelection,
    EmptySelection,
    KOutOfRange,
    SingularCovariance,
)
from .metrics import CondensedDistances


@dataclass(frozen=True)
class KMeansModel:
    centroids: np.ndarray
    labels: np.ndarray  # 1..k, no noise
    inertia: float
    iterations: int
    seed: int


@dataclass(frozen=True)
class GmmModel:
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray   # (k, m, m)
    responsibilities: np.ndarray
    log_likelihoods: np.ndarray  # trace, one entry per EM iteration
    labels: np.ndarray  # argmax responsibility, 1..k

    @property
    def log_likelihood(self) -> float:
        return float(self.log_likelihoods[-1])


@dataclass(frozen=True)
class DecisionGraph:
    rho: np.ndarray
    delta: np.ndarray
    nearest_denser: np.ndarray  # index, -1 for the global density peak
    distances: CondensedDistances = field(repr=False)

    def to_json_dict(self) -> dict:
        return {
            "rho": [float(v) for v in self.rho],
            "delta": [float(v) for v in self.delta],
            "nearest_denser": [
                None if v < 0 else int(v) for v in self.nearest_denser
            ],
        }


def _rng_for(seed, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), restart]))


def kmeanspp_init(dataset: Dataset, k: int, seed=0, rng=None) -> np.ndarray:
    """First centroid uniform; each next drawn with probability
    d_min^2 / sum d_min^2 against the already chosen ones."""
    x = dataset.points
    n = x.shape[0]
    if not 1 <= k <= n:
        raise KOutOfRange(f"k={k} outside [1, {n}]")
    if rng is None:
        rng = _rng_for(seed, 0)
    chosen = [int(rng.integers(n))]
    d2 = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k:
        total = d2.sum()
        if total <= 0:
            # all remaining points coincide with chosen centroids
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        chosen.append(idx)
        d2 = np.minimum(d2, ((x - x[idx]) ** 2).sum(axis=1))
    return x[chosen].copy()


def _lloyd(x: np.ndarray, centroids: np.ndarray, max_iter: int, tol: float):
    n, k = x.shape[0], centroids.shape[0]
    prev_inertia = np.inf
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)  # ties -> lowest centroid index
        inertia = float(d2[np.arange(n), assign].sum())
        assert inertia <= prev_inertia + 1e-9 * max(1.0, prev_inertia)
        prev_inertia = inertia
        new_centroids = centroids.copy()
        empty = [j for j in range(k) if not np.any(assign == j)]
        for j in range(k):
            members = x[assign == j]
            if len(members):
                new_centroids[j] = members.mean(axis=0)
        if empty:
            # repair: seize the points farthest from their centroid
            dist_own = d2[np.arange(n), assign].copy()
            for j in empty:
                far = int(dist_own.argmax())
                new_centroids[j] = x[far]
                dist_own[far] = -1.0
        shift = float(np.abs(new_centroids - centroids).max())
        centroids = new_centroids
        if shift < tol:
            break
    d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    assign = d2.argmin(axis=1)
    inertia = float(d2[np.arange(n), assign].sum())
    return centroids, assign, inertia, iterations


def kmeans(
    dataset: Dataset,
    k: int,
    init: str = "kmeanspp",
    n_restarts: int = 10,
    max_iter: int = 300,
    tol: float = 1e-6,
    seed=0,
    centroids: Optional[np.ndarray] = None,
) -> KMeansModel:
    """Best-of-restarts Lloyd iteration; inertia is non-increasing within
    each restart and the lowest final inertia wins."""
    x = dataset.points
    n = x.shape[0]
    if not 1 <= k <= n:
        raise KOutOfRange(f"k={k} outside [1, {n}]")
    if init not in ("random", "kmeanspp", "given"):
        raise ValueError(f"unknown init {init!r}")
    if init == "given":
        if centroids is None:
            raise ValueError("init='given' needs centroids")
        n_restarts = 1
    best = None
    for restart in range(max(1, n_restarts)):
        rng = _rng_for(seed, restart)
        if init == "given":
            start = np.asarray(centroids, dtype=float).copy()
        elif init == "random":
            start = x[rng.choice(n, size=k, replace=False)].copy()
        else:
            start = kmeanspp_init(dataset, k, rng=rng)
        cents, assign, inertia, iters = _lloyd(x, start, max_iter, tol)
        if best is None or inertia < best[2]:
            best = (cents, assign, inertia, iters)
    cents, assign, inertia, iters = best
    return KMeansModel(cents, assign + 1, inertia, iters, int(seed))


# -- Gaussian mixtures ------------------------------------------------------------


def _log_gaussian(x: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> np.ndarray:
    m = x.shape[1]
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance(str(exc)) from exc
    dev = x - mean
    sol = np.linalg.solve(chol, dev.T)
    maha = (sol**2).sum(axis=0)
    logdet = 2.0 * np.log(np.diag(chol)).sum()
    return -0.5 * (m * np.log(2 * np.pi) + logdet + maha)


def gmm_em(
    dataset: Dataset,
    k: int,
    init: str = "kmeans",
    max_iter: int = 200,
    tol: float = 1e-7,
    cov_reg: float = 1e-6,
    n_restarts: int = 1,
    seed=0,
    initial: Optional[tuple[np.ndarray, np.ndarray, np.ndarray]] = None,
) -> GmmModel:
    """EM fit of k Gaussians; the log-likelihood trace is non-decreasing and
    the best final likelihood over restarts is returned."""
    x = dataset.points
    n, m = x.shape
    if not 1 <= k <= n:
        raise KOutOfRange(f"k={k} outside [1, {n}]")
    if init not in ("kmeans", "given"):
        raise ValueError(f"unknown init {init!r}")
    if init == "given":
        if initial is None:
            raise ValueError("init='given' needs initial (weights, means, covs)")
        n_restarts = 1
    eye = cov_reg * np.eye(m)
    best = None
    for restart in range(max(1, n_restarts)):
        if init == "given":
            weights, means, covs = (np.asarray(a, dtype=float).copy() for a in initial)
            covs = covs + eye
        else:
            km = kmeans(dataset, k, n_restarts=1, seed=np.random.SeedSequence(
                [int(seed), restart]).generate_state(1)[0])
            means = km.centroids.copy()
            weights = np.array([(km.labels == j + 1).mean() for j in range(k)])
            weights = np.where(weights > 0, weights, 1.0 / n)
            weights /= weights.sum()
            covs = np.empty((k, m, m))
            for j in range(k):
                members = x[km.labels == j + 1]
                if len(members) > 1:
                    covs[j] = np.cov(members.T, bias=True).reshape(m, m) + eye
                else:
                    covs[j] = np.cov(x.T, bias=True).reshape(m, m) + eye
        trace = []
        resp = None
        snapshot = None
        for _ in range(max_iter):
            logp = np.empty((n, k))
            for j in range(k):
                logp[:, j] = np.log(weights[j]) + _log_gaussian(x, means[j], covs[j])
            mx = logp.max(axis=1, keepdims=True)
            lse = mx[:, 0] + np.log(np.exp(logp - mx).sum(axis=1))
            ll = float(lse.sum())
            resp = np.exp(logp - lse[:, None])
            if trace and ll < trace[-1]:
                # the covariance ridge can break exact EM monotonicity at
                # convergence scale; stop at the best iterate seen
                weights, means, covs, resp = snapshot
                break
            converged = bool(trace) and ll - trace[-1] < tol
            trace.append(ll)
            if converged:
                break
            snapshot = (weights.copy(), means.copy(), covs.copy(), resp)
            nk = resp.sum(axis=0)
            weights = nk / n
            means = (resp.T @ x) / nk[:, None]
            for j in range(k):
                dev = x - means[j]
                covs[j] = (resp[:, j, None] * dev).T @ dev / nk[j] + eye
        if best is None or trace[-1] > best[0]:
            best = (trace[-1], weights, means, covs, resp, np.array(trace))
    _, weights, means, covs, resp, trace = best
    labels = resp.argmax(axis=1) + 1
    return GmmModel(weights, means, covs, resp, trace, labels)


# -- density peaks ------------------------------------------------------------------


def density_peaks_graph(distances: CondensedDistances, r: float) -> DecisionGraph:
    """Per point: neighbor count within r (rho) and distance to the nearest
    denser point (delta). Equal densities break toward the lower index; the
    global peak gets delta = dataset diameter and no denser point."""
    if r <= 0:
        raise ValueError(f"r must be > 0, got {r}")
    n = distances.n
    square = distances.to_square()
    rho = (square <= r).sum(axis=1) - 1  # self excluded
    order = sorted(range(n), key=lambda i: (-rho[i], i))  # denser first
    delta = np.empty(n)
    nearest = np.full(n, -1)
    diameter = float(square.max()) if n > 1 else 0.0
    for pos, i in enumerate(order):
        if pos == 0:
            delta[i] = diameter
            continue
        denser = order[:pos]
        ds = square[i, denser]
        jbest = int(np.argmin(ds))  # distance ties -> earliest (denser) point
        delta[i] = float(ds[jbest])
        nearest[i] = denser[jbest]
    return DecisionGraph(rho.astype(float), delta, nearest, distances)


def density_peaks_assign(graph: DecisionGraph, selected: Sequence[int]) -> np.ndarray:
    """Seed clusters 1..k from the selected points in the given order; every
    other point joins the cluster of its nearest denser point. If the global
    peak itself is unselected it joins the closest selected peak."""
    selected = [int(s) for s in selected]
    if not selected:
        raise EmptySelection("select at least one peak")
    if len(set(selected)) != len(selected):
        raise DuplicateSelection(f"duplicate peaks in {selected}")
    n = len(graph.rho)
    if any(not 0 <= s < n for s in selected):
        raise ClusterlabError(f"peak index outside [0, {n - 1}]")
    labels = np.zeros(n, dtype=int)
    for c, s in enumerate(selected, start=1):
        labels[s] = c
    order = sorted(range(n), key=lambda i: (-graph.rho[i], i))
    for i in order:
        if labels[i]:
            continue
        up = graph.nearest_denser[i]
        if up >= 0:
            labels[i] = labels[up]
        else:
            # unselected global peak: fall back to the closest seed
            labels[i] = labels[
                min(selected, key=lambda s: graph.distances.get(i, s))
            ]
    return labels
