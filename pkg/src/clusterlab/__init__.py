"""Clustering toolkit: connectivity-, prototype-, and density-based methods
with validation indices, synthetic generators, a batch CLI, and a small
HTTP service for interactive cluster selection."""

from importlib.resources import files

from .dataset import (
    ClusteringResult,
    Dataset,
    canonicalize_labels,
    make_dataset,
    match_percentage,
    n_clusters,
)
from .metrics import CondensedDistances, pairwise

__version__ = "0.1.0"

__all__ = [
    "ClusteringResult",
    "CondensedDistances",
    "Dataset",
    "canonicalize_labels",
    "iris",
    "make_dataset",
    "match_percentage",
    "n_clusters",
    "pairwise",
]


def iris() -> Dataset:
    """The bundled 150-flower measurement table with its 3 classes."""
    from .io import parse_csv_text

    text = files("clusterlab").joinpath("data/iris.csv").read_text("utf-8")
    return parse_csv_text(text, has_header=True, label_column="class")
