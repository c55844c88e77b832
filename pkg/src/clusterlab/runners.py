"""Method registry: one entry point per clustering method, shared by the
batch CLI and the HTTP service so both produce identical results.

Each runner maps (dataset, params, seed) to a ClusteringResult whose
artifacts dict carries the JSON-ready extras (hierarchy rows, decision
graph, embedding, condensed tree).
"""

from __future__ import annotations

from typing import Any, Callable

import numpy as np

from . import density, hierarchy, prototypes, spectral
from .dataset import ClusteringResult, Dataset, match_percentage
from .errors import UnknownMethod
from .metrics import pairwise
from .neighbors import knn_neighbors, radius_neighbors
from .validation import homogeneity_completeness_v, mi_nmi_ami, rand_ari


def _p(params: dict, key: str, default=None, cast=None):
    value = params.get(key, default)
    if value is None:
        raise UnknownMethod(f"missing required parameter {key!r}")
    return cast(value) if cast else value


def run_kmeans(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    model = prototypes.kmeans(
        dataset,
        _p(params, "k", cast=int),
        init=params.get("init", "kmeanspp"),
        n_restarts=int(params.get("n_restarts", 10)),
        max_iter=int(params.get("max_iter", 300)),
        tol=float(params.get("tol", 1e-6)),
        seed=seed,
    )
    return ClusteringResult(
        model.labels,
        "kmeans",
        params,
        {
            "centroids": model.centroids,
            "inertia": model.inertia,
            "iterations": model.iterations,
        },
    )


def run_gmm(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    model = prototypes.gmm_em(
        dataset,
        _p(params, "k", cast=int),
        max_iter=int(params.get("max_iter", 200)),
        tol=float(params.get("tol", 1e-7)),
        cov_reg=float(params.get("cov_reg", 1e-6)),
        n_restarts=int(params.get("n_restarts", 10)),
        seed=seed,
    )
    return ClusteringResult(
        model.labels,
        "gmm",
        params,
        {
            "weights": model.weights,
            "means": model.means,
            "log_likelihood": model.log_likelihood,
        },
    )


def run_spectral(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    n_clusters = _p(params, "n_clusters", cast=int)
    distances = pairwise(dataset, params.get("metric", "euclidean"))
    if params.get("affinity", "knn") == "gaussian":
        s = spectral.gaussian_affinity(distances, float(_p(params, "sigma")))
    else:
        s = spectral.knn_affinity(
            distances, _p(params, "k", cast=int), params.get("mode", "union")
        )
    embedding = spectral.spectral_embed(s, n_clusters)
    model = prototypes.kmeans(
        Dataset(embedding, tuple(f"e{i}" for i in range(n_clusters))),
        n_clusters,
        n_restarts=int(params.get("n_restarts", 10)),
        seed=seed,
    )
    return ClusteringResult(
        model.labels, "spectral", params, {"embedding": embedding}
    )


def _linkage_runner(linkage: str) -> Callable:
    def run(dataset: Dataset, params: dict, seed) -> ClusteringResult:
        distances = pairwise(dataset, params.get("metric", "euclidean"))
        h = hierarchy.agglomerate(distances, linkage)
        artifacts: dict[str, Any] = {"hierarchy": h}
        if "cut_count" in params:
            labels = hierarchy.cut_by_count(h, int(params["cut_count"]))
        elif "cut_threshold" in params:
            labels = hierarchy.cut_by_threshold(
                h, float(params["cut_threshold"]), int(params.get("min_size", 1))
            )
        else:
            labels = hierarchy.cut_by_count(h, 1)
        return ClusteringResult(labels, linkage, params, artifacts)

    return run


def run_hdbscan(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    """Mutual-reachability single linkage, condensed tree, persistence pick."""
    n_c = int(params.get("n_c", 2))
    mcs = int(params.get("min_cluster_size", 5))
    distances = pairwise(dataset, params.get("metric", "euclidean"))
    mr = density.mutual_reachability(distances, n_c)
    tree = hierarchy.minimum_spanning_tree(mr.n, mr)
    h = hierarchy.single_linkage_from_mst(tree)
    condensed = hierarchy.condense(h, mcs, heights_are_distances=True)
    labels = hierarchy.select_by_persistence(condensed)
    return ClusteringResult(
        labels,
        "hdbscan",
        params,
        {"hierarchy": h, "condensed_tree": condensed},
    )


def run_dbscan(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    distances = pairwise(dataset, params.get("metric", "euclidean"))
    table = radius_neighbors(distances, float(_p(params, "r")))
    labels = density.dbscan(
        table,
        _p(params, "n_c", cast=int),
        border_policy=params.get("border_policy", "first_core"),
        min_cluster_size=int(params.get("min_cluster_size", 1)),
    )
    return ClusteringResult(labels, "dbscan", params, {})


def run_jarvis_patrick(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    """Classic convention: k counts the point itself, so the neighbor table
    holds the k-1 nearest other points."""
    k = _p(params, "k", cast=int)
    n_c = _p(params, "n_c", cast=int)
    distances = pairwise(dataset, params.get("metric", "euclidean"))
    table = knn_neighbors(distances, max(k - 1, 1))
    edges = density.snn_similarity(
        table, require_mutual=bool(params.get("require_mutual", True))
    )
    labels = density.shared_neighbor_cluster(edges, n_c)
    return ClusteringResult(labels, "jarvis_patrick", params, {"edges": edges})


def run_commonnn(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    distances = pairwise(dataset, params.get("metric", "euclidean"))
    table = radius_neighbors(distances, float(_p(params, "r")))
    edges = density.commonnn_similarity(
        table, count_self=bool(params.get("count_self", True))
    )
    labels = density.shared_neighbor_cluster(edges, _p(params, "n_c", cast=int))
    return ClusteringResult(labels, "commonnn", params, {"edges": edges})


def run_grid(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    grid = density.build_grid(
        dataset,
        n_bins=int(params["n_bins"]) if "n_bins" in params else None,
        eps=float(params["eps"]) if "eps" in params else None,
    )
    labels = density.grid_threshold_cluster(grid, _p(params, "min_count", cast=int))
    return ClusteringResult(
        labels,
        "grid",
        params,
        {"cell_counts": {str(k): v for k, v in sorted(grid.counts.items())}},
    )


def run_density_peaks(dataset: Dataset, params: dict, seed) -> ClusteringResult:
    distances = pairwise(dataset, params.get("metric", "euclidean"))
    graph = prototypes.density_peaks_graph(distances, float(_p(params, "r")))
    peaks_param = params.get("peaks", "auto:3")
    if isinstance(peaks_param, str) and peaks_param.startswith("auto"):
        count = int(peaks_param.split(":")[1]) if ":" in peaks_param else 3
        gamma = graph.rho * graph.delta
        peaks = sorted(np.argsort(-gamma)[:count].tolist())
    elif isinstance(peaks_param, str):
        peaks = [int(v) for v in peaks_param.split("+") if v != ""]
    else:
        peaks = [int(v) for v in peaks_param]
    labels = prototypes.density_peaks_assign(graph, peaks)
    return ClusteringResult(
        labels, "density_peaks", params, {"decision_graph": graph, "peaks": peaks}
    )


METHODS: dict[str, Callable[[Dataset, dict, Any], ClusteringResult]] = {
    "kmeans": run_kmeans,
    "gmm": run_gmm,
    "spectral": run_spectral,
    "single": _linkage_runner("single"),
    "complete": _linkage_runner("complete"),
    "average": _linkage_runner("average"),
    "hdbscan": run_hdbscan,
    "dbscan": run_dbscan,
    "jarvis_patrick": run_jarvis_patrick,
    "commonnn": run_commonnn,
    "grid": run_grid,
    "density_peaks": run_density_peaks,
}


def run_method(dataset: Dataset, method: str, params: dict, seed=0) -> ClusteringResult:
    if method not in METHODS:
        raise UnknownMethod(
            f"unknown method {method!r}; registered: {', '.join(sorted(METHODS))}"
        )
    return METHODS[method](dataset, dict(params), seed)


def score_against_truth(labels: np.ndarray, truth: np.ndarray) -> dict:
    """Flat score map used in result.json and service responses."""
    from .dataset import MAX_EXACT_MATCH_CLUSTERS, n_clusters

    h, c, v = homogeneity_completeness_v(labels, truth)
    rand, ari = rand_ari(labels, truth)
    mi, nmi, ami = mi_nmi_ami(labels, truth)
    exact = n_clusters(labels) <= MAX_EXACT_MATCH_CLUSTERS
    return {
        "match": match_percentage(labels, truth) if exact else None,
        "match_ignore_noise": (
            match_percentage(labels, truth, ignore_noise=True) if exact else None
        ),
        "homogeneity": h,
        "completeness": c,
        "v_measure": v,
        "rand": rand,
        "ari": ari,
        "mi": mi,
        "nmi": nmi,
        "ami": ami,
    }
