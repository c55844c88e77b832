"""Feature scaling and one-hot encoding.

z-scaling uses the population standard deviation (divisor n); all scalers
are strictly monotone per feature and invertible through inverse_scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dataset import Dataset
from .errors import (
    ConstantFeature,
    ConstantZeroFeature,
    InvalidInterval,
    KindMismatch,
)

ZSCORE = "zscore"
MINMAX = "minmax"
MAXABS = "maxabs"


@dataclass(frozen=True)
class ScalerParams:
    kind: str
    mean: Optional[np.ndarray] = None
    std: Optional[np.ndarray] = None
    min: Optional[np.ndarray] = None
    max: Optional[np.ndarray] = None
    max_abs: Optional[np.ndarray] = None
    interval: Optional[tuple[float, float]] = None


def z_scale(dataset: Dataset) -> tuple[Dataset, ScalerParams]:
    """Per feature: subtract the mean, divide by the population std."""
    x = dataset.points
    mean = x.mean(axis=0)
    std = x.std(axis=0)  # population (divide by n)
    if np.any(std == 0):
        j = int(np.flatnonzero(std == 0)[0])
        raise ConstantFeature(f"feature {dataset.feature_names[j]!r} has zero std")
    out = (x - mean) / std
    return dataset.with_points(out), ScalerParams(ZSCORE, mean=mean, std=std)


def min_max_scale(
    dataset: Dataset, lo: float = 0.0, hi: float = 1.0
) -> tuple[Dataset, ScalerParams]:
    """Map each feature onto the closed interval [lo, hi]."""
    if not lo < hi:
        raise InvalidInterval(f"need lo < hi, got [{lo}, {hi}]")
    x = dataset.points
    mn = x.min(axis=0)
    mx = x.max(axis=0)
    if np.any(mx == mn):
        j = int(np.flatnonzero(mx == mn)[0])
        raise ConstantFeature(f"feature {dataset.feature_names[j]!r} is constant")
    out = (x - mn) / (mx - mn) * (hi - lo) + lo
    return dataset.with_points(out), ScalerParams(
        MINMAX, min=mn, max=mx, interval=(float(lo), float(hi))
    )


def max_abs_scale(dataset: Dataset) -> tuple[Dataset, ScalerParams]:
    """Divide each feature by its maximum absolute value; sign preserved."""
    x = dataset.points
    ma = np.abs(x).max(axis=0)
    if np.any(ma == 0):
        j = int(np.flatnonzero(ma == 0)[0])
        raise ConstantZeroFeature(
            f"feature {dataset.feature_names[j]!r} is identically zero"
        )
    return dataset.with_points(x / ma), ScalerParams(MAXABS, max_abs=ma)


def inverse_scale(dataset: Dataset, params: ScalerParams) -> Dataset:
    """Undo the matching forward scaler."""
    x = dataset.points
    if params.kind == ZSCORE:
        return dataset.with_points(x * params.std + params.mean)
    if params.kind == MINMAX:
        lo, hi = params.interval
        return dataset.with_points(
            (x - lo) / (hi - lo) * (params.max - params.min) + params.min
        )
    if params.kind == MAXABS:
        return dataset.with_points(x * params.max_abs)
    raise KindMismatch(f"unknown scaler kind {params.kind!r}")


def one_hot_encode(column: Sequence) -> np.ndarray:
    """n x c binary matrix; columns ordered by first appearance of category."""
    categories: list = []
    seen = {}
    for v in column:
        if v not in seen:
            seen[v] = len(categories)
            categories.append(v)
    out = np.zeros((len(column), len(categories)), dtype=int)
    for i, v in enumerate(column):
        out[i, seen[v]] = 1
    return out
