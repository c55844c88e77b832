"""Batch command line: gen, preprocess, cluster, hierarchy, validate, serve.

Exit codes: 0 success, 2 configuration error, 3 data error. All outputs are
plot-ready CSV/JSON; rendering belongs to the explorer UI.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import hierarchy as hier
from . import preprocess as prep
from .dataset import Dataset, n_clusters
from .errors import ClusterlabError, DataError
from .generators import gen_blobs, gen_gauss1d, gen_moons
from .io import (
    hierarchy_to_csv,
    hierarchy_to_json_dict,
    ingest_csv,
    serialize_artifact,
    write_dataset_csv,
    write_json,
    write_labels_csv,
)
from .metrics import pairwise
from .runners import METHODS, run_method, score_against_truth
from .validation import calinski_harabasz, inertia, silhouette


def _parse_value(text: str):
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ClusterlabError(f"--param expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key] = _parse_value(value)
    return out


def _load(args) -> Dataset:
    if not args.input:
        raise ClusterlabError("--input is required")
    return ingest_csv(
        args.input,
        has_header=not args.no_header,
        label_column=args.label_column,
    )


def _outdir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gen(args) -> int:
    params = _params(args.param)
    out = _outdir(args)
    method = args.method or "moons"
    if method == "moons":
        ds = gen_moons(
            int(params.get("n", 2000)),
            float(params.get("noise_sd", 0.07)),
            seed=args.seed,
        )
    elif method == "blobs":
        centers = [
            [float(v) for v in point.split(":")]
            for point in str(params.get("centers", "0:0,4:4,0:4")).split(",")
        ]
        ds = gen_blobs(
            int(params.get("n", 300)), centers,
            sd=float(params.get("sd", 0.5)), seed=args.seed,
        )
    elif method == "gauss1d":
        floats = lambda key, default: [
            float(v) for v in str(params.get(key, default)).split(",")
        ]
        ds, mix = gen_gauss1d(
            floats("weights", "0.5,0.3,0.2"),
            floats("means", "-4,0,3"),
            floats("sds", "1,0.6,0.8"),
            int(params.get("n", 500)),
            seed=args.seed,
        )
        write_json(
            {
                "weights": mix.weights.tolist(),
                "means": mix.means.tolist(),
                "sds": mix.sds.tolist(),
            },
            out / "mixture.json",
        )
    else:
        raise ClusterlabError(f"unknown generator {method!r} (moons, blobs, gauss1d)")
    write_dataset_csv(ds, out / "dataset.csv")
    print(f"wrote {out / 'dataset.csv'} ({ds.n} x {ds.m})")
    return 0


def cmd_preprocess(args) -> int:
    params = _params(args.param)
    ds = _load(args)
    out = _outdir(args)
    method = args.method or "zscore"
    if method == "zscore":
        scaled, sp = prep.z_scale(ds)
        stats = {"mean": sp.mean.tolist(), "std": sp.std.tolist()}
    elif method == "minmax":
        scaled, sp = prep.min_max_scale(
            ds, float(params.get("lo", 0.0)), float(params.get("hi", 1.0))
        )
        stats = {
            "min": sp.min.tolist(),
            "max": sp.max.tolist(),
            "interval": list(sp.interval),
        }
    elif method == "maxabs":
        scaled, sp = prep.max_abs_scale(ds)
        stats = {"max_abs": sp.max_abs.tolist()}
    else:
        raise ClusterlabError(f"unknown scaler {method!r} (zscore, minmax, maxabs)")
    write_dataset_csv(scaled, out / "dataset.csv")
    write_json({"kind": sp.kind, **stats}, out / "scaler.json")
    print(f"wrote {out / 'dataset.csv'} and scaler.json")
    return 0


def _write_artifacts(artifacts: dict, out: Path) -> list[str]:
    from .io import embedding_to_csv, serialize_artifact

    written = []
    for key, value in artifacts.items():
        if key == "embedding":
            embedding_to_csv(np.asarray(value), out / "embedding.csv")
            written.append("embedding.csv")
        elif key in ("hierarchy", "condensed_tree", "decision_graph", "edges"):
            write_json(serialize_artifact(value), out / f"{key}.json")
            written.append(f"{key}.json")
    return written


def cmd_cluster(args) -> int:
    params = _params(args.param)
    ds = _load(args)
    out = _outdir(args)
    if not args.method:
        raise ClusterlabError(
            f"--method is required; registered: {', '.join(sorted(METHODS))}"
        )
    started = time.perf_counter()
    result = run_method(ds, args.method, params, seed=args.seed)
    elapsed = time.perf_counter() - started
    write_labels_csv(result.labels, out / "labels.csv")
    files = ["labels.csv"] + _write_artifacts(result.artifacts, out)
    payload = {
        "method": result.method,
        "params": result.params,
        "seed": args.seed,
        "n_clusters": n_clusters(result.labels),
        "n_noise": int(np.sum(result.labels == 0)),
        "files": sorted(files),
        "timings": {"seconds": elapsed},
    }
    for key in ("inertia", "log_likelihood", "iterations", "peaks", "centroids"):
        if key in result.artifacts:
            payload[key] = serialize_artifact(result.artifacts[key])
    if ds.true_labels is not None:
        payload["scores"] = score_against_truth(result.labels, ds.true_labels)
    write_json(payload, out / "result.json")
    print(f"{result.method}: {payload['n_clusters']} clusters -> {out / 'labels.csv'}")
    return 0


def cmd_hierarchy(args) -> int:
    params = _params(args.param)
    ds = _load(args)
    out = _outdir(args)
    linkage = args.method or "single"
    if linkage not in ("single", "complete", "average"):
        raise ClusterlabError("hierarchy method must be single, complete or average")
    distances = pairwise(ds, params.get("metric", "euclidean"))
    h = hier.agglomerate(distances, linkage)
    write_json(hierarchy_to_json_dict(h), out / "hierarchy.json")
    hierarchy_to_csv(h, out / "hierarchy.csv")
    files = ["hierarchy.json", "hierarchy.csv"]
    if "cut_threshold" in params or "cut_count" in params:
        if "cut_count" in params:
            labels = hier.cut_by_count(h, int(params["cut_count"]))
        else:
            labels = hier.cut_by_threshold(
                h, float(params["cut_threshold"]), int(params.get("min_size", 1))
            )
        write_labels_csv(labels, out / "labels.csv")
        files.append("labels.csv")
    print(f"{linkage} linkage: {h.n_merges} merges -> {', '.join(files)}")
    return 0


def cmd_validate(args) -> int:
    ds = _load(args)
    out = _outdir(args)
    if not args.labels:
        raise ClusterlabError("--labels <labels.csv> is required")
    rows = Path(args.labels).read_text(encoding="utf-8").strip().splitlines()
    labels = np.array([int(line.split(",")[1]) for line in rows[1:]])
    if labels.size != ds.n:
        raise DataError(f"{labels.size} labels for {ds.n} points")
    scores: dict = {}
    if ds.true_labels is not None:
        scores.update(score_against_truth(labels, ds.true_labels))
    if n_clusters(labels) >= 2 and not np.any(labels == 0):
        scores["silhouette_mean"] = silhouette(pairwise(ds), labels)[1]
        scores["calinski_harabasz"] = calinski_harabasz(ds, labels)
        scores["inertia"] = inertia(ds, labels)
    write_json(scores, out / "scores.json")
    print(json.dumps(scores, sort_keys=True))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clusterlab",
        description="Connectivity-, prototype-, and density-based clustering toolkit.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, handler in (
        ("gen", cmd_gen),
        ("preprocess", cmd_preprocess),
        ("cluster", cmd_cluster),
        ("hierarchy", cmd_hierarchy),
        ("validate", cmd_validate),
        ("serve", cmd_serve),
    ):
        p = sub.add_parser(verb)
        p.set_defaults(handler=handler)
        p.add_argument("--input", help="input CSV path")
        p.add_argument("--method", help="method or generator name")
        p.add_argument(
            "--param",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="method parameter, repeatable",
        )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output directory (default: .)")
        p.add_argument("--labels", help="labels.csv to validate")
        p.add_argument("--label-column", help="name or index of the class column")
        p.add_argument("--no-header", action="store_true")
        p.add_argument("--host", default="127.0.0.1")
        p.add_argument("--port", type=int, default=8710)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except ClusterlabError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
