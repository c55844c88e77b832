"""Synthetic datasets: two moons, isotropic blobs, 1-D Gaussian mixtures."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .dataset import Dataset
from .density import GaussianMixture1D
from .errors import InvalidMixture


def gen_moons(n: int, noise_sd: float = 0.07, seed=0) -> Dataset:
    """Two interleaved semicircles with isotropic Gaussian jitter.

    Upper moon: (cos t, sin t); lower moon: (1 - cos t, 0.5 - sin t),
    t on a uniform grid over [0, pi]; labels 1 and 2 by moon.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rng = np.random.default_rng(seed)
    n_upper = n // 2
    n_lower = n - n_upper
    t_up = np.linspace(0.0, np.pi, n_upper)
    t_lo = np.linspace(0.0, np.pi, n_lower)
    points = np.concatenate(
        [
            np.column_stack([np.cos(t_up), np.sin(t_up)]),
            np.column_stack([1.0 - np.cos(t_lo), 0.5 - np.sin(t_lo)]),
        ]
    )
    if noise_sd:
        points = points + rng.normal(0.0, noise_sd, points.shape)
    labels = np.concatenate([np.ones(n_upper, int), np.full(n_lower, 2)])
    return Dataset(points, ("x", "y"), labels)


def gen_blobs(
    n: int, centers: Sequence[Sequence[float]], sd: float = 1.0, seed=0
) -> Dataset:
    """n points split evenly across isotropic Gaussians at the centers."""
    if n < 1:
        raise ValueError("need n >= 1")
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if centers.shape[0] < 1:
        raise ValueError("need at least one center")
    rng = np.random.default_rng(seed)
    k, m = centers.shape
    sizes = [n // k + (1 if i < n % k else 0) for i in range(k)]
    chunks, labels = [], []
    for i, size in enumerate(sizes):
        chunks.append(centers[i] + rng.normal(0.0, sd, (size, m)))
        labels.append(np.full(size, i + 1))
    return Dataset(
        np.concatenate(chunks),
        tuple(f"f{j}" for j in range(m)),
        np.concatenate(labels),
    )


def gen_gauss1d(
    weights: Sequence[float],
    means: Sequence[float],
    sds: Sequence[float],
    n: int,
    seed=0,
) -> tuple[Dataset, GaussianMixture1D]:
    """Sample a 1-D Gaussian mixture; returns the samples together with the
    analytic mixture for level-set oracles."""
    mix = GaussianMixture1D(
        np.asarray(weights, float), np.asarray(means, float), np.asarray(sds, float)
    )
    if n < 1:
        raise InvalidMixture("need n >= 1 samples")
    rng = np.random.default_rng(seed)
    component = rng.choice(len(mix.weights), size=n, p=mix.weights)
    samples = rng.normal(mix.means[component], mix.sds[component])
    return (
        Dataset(samples[:, None], ("x",), component + 1),
        mix,
    )
