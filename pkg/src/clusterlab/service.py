"""JSON-over-HTTP service backing the interactive explorer.

Sessions are in-memory: a dataset snapshot plus artifacts (hierarchies,
decision graphs) cached by parameter fingerprint, so replaying a request
returns a byte-identical body whether it hits the cache or not.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import hierarchy as hier
from . import prototypes
from .dataset import Dataset, n_clusters
from .errors import ClusterlabError, DataError
from .generators import gen_blobs, gen_gauss1d, gen_moons
from .io import parse_csv_text, serialize_artifact
from .runners import run_method, score_against_truth

DEFAULT_PORT = 8710


class CreateSession(BaseModel):
    csv: Optional[str] = None
    has_header: bool = True
    label_column: Optional[str] = None
    generator: Optional[dict] = None
    seed: int = 0


class ComputeRequest(BaseModel):
    method: str
    params: dict = {}
    seed: int = 0


class CutRequest(BaseModel):
    hierarchy: str
    threshold: Optional[float] = None
    count: Optional[int] = None
    min_size: int = 1


class PeaksRequest(BaseModel):
    graph: str
    selected: list[int]


@dataclass
class Session:
    dataset: Dataset
    artifacts: dict[str, Any] = field(default_factory=dict)
    results: dict[str, dict] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _fingerprint(method: str, params: dict, seed: int) -> str:
    blob = json.dumps([method, params, seed], sort_keys=True, default=str)
    return hashlib.sha1(blob.encode()).hexdigest()[:12]


def _generate(spec: dict, seed: int) -> Dataset:
    kind = spec.get("kind", "moons")
    if kind == "moons":
        return gen_moons(int(spec.get("n", 2000)), float(spec.get("noise_sd", 0.07)), seed)
    if kind == "blobs":
        return gen_blobs(
            int(spec.get("n", 300)),
            spec.get("centers", [[0, 0], [4, 4], [0, 4]]),
            float(spec.get("sd", 0.5)),
            seed,
        )
    if kind == "gauss1d":
        ds, _ = gen_gauss1d(
            spec.get("weights", [0.5, 0.3, 0.2]),
            spec.get("means", [-4, 0, 3]),
            spec.get("sds", [1, 0.6, 0.8]),
            int(spec.get("n", 500)),
            seed,
        )
        return ds
    raise ClusterlabError(f"unknown generator {kind!r}")


def create_app() -> FastAPI:
    app = FastAPI(title="clusterlab service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}

    def _session(sid: str) -> Session:
        if sid not in sessions:
            raise HTTPException(404, f"unknown session {sid}")
        return sessions[sid]

    @app.post("/sessions")
    def create_session(body: CreateSession):
        try:
            if body.csv is not None:
                dataset = parse_csv_text(
                    body.csv, body.has_header, body.label_column
                )
            elif body.generator is not None:
                dataset = _generate(body.generator, body.seed)
            else:
                raise HTTPException(400, "provide csv or generator")
        except DataError as exc:
            raise HTTPException(400, str(exc)) from exc
        except ClusterlabError as exc:
            raise HTTPException(400, str(exc)) from exc
        sid = uuid.uuid4().hex[:12]
        sessions[sid] = Session(dataset)
        return {
            "session": sid,
            "n": dataset.n,
            "m": dataset.m,
            "feature_names": list(dataset.feature_names),
            "classes": (
                int(np.unique(dataset.true_labels).size)
                if dataset.true_labels is not None
                else None
            ),
            "points": dataset.points.tolist(),
            "true_labels": (
                dataset.true_labels.tolist()
                if dataset.true_labels is not None
                else None
            ),
        }

    @app.post("/sessions/{sid}/compute")
    def compute(sid: str, body: ComputeRequest):
        session = _session(sid)
        key = _fingerprint(body.method, body.params, body.seed)
        with session.lock:
            cached = session.results.get(key)
        if cached is None:
            try:
                result = run_method(session.dataset, body.method, body.params, body.seed)
            except ClusterlabError as exc:
                raise HTTPException(422, str(exc)) from exc
            artifact_keys = {}
            stored: dict[str, Any] = {}
            serialized = {}
            for name, value in result.artifacts.items():
                akey = f"{name}-{key}"
                artifact_keys[name] = akey
                stored[akey] = value
                serialized[name] = serialize_artifact(value)
            payload = {
                "method": result.method,
                "params": body.params,
                "seed": body.seed,
                "labels": result.labels.tolist(),
                "n_clusters": n_clusters(result.labels),
                "n_noise": int(np.sum(result.labels == 0)),
                "artifact_keys": artifact_keys,
                "artifacts": serialized,
            }
            if session.dataset.true_labels is not None:
                payload["scores"] = score_against_truth(
                    result.labels, session.dataset.true_labels
                )
            with session.lock:
                session.results[key] = payload
                session.artifacts.update(stored)
            cached = payload
        return cached

    @app.post("/sessions/{sid}/cut")
    def cut(sid: str, body: CutRequest):
        session = _session(sid)
        h = session.artifacts.get(body.hierarchy)
        if not isinstance(h, hier.MergeHierarchy):
            raise HTTPException(404, f"unknown hierarchy {body.hierarchy!r}")
        try:
            if body.count is not None:
                labels = hier.cut_by_count(h, body.count)
            elif body.threshold is not None:
                labels = hier.cut_by_threshold(h, body.threshold, body.min_size)
            else:
                raise ClusterlabError("provide threshold or count")
        except ClusterlabError as exc:
            raise HTTPException(422, str(exc)) from exc
        truth = session.dataset.true_labels
        return {
            "labels": labels.tolist(),
            "n_clusters": n_clusters(labels),
            "n_noise": int(np.sum(labels == 0)),
            "scores": score_against_truth(labels, truth) if truth is not None else None,
        }

    @app.post("/sessions/{sid}/peaks")
    def peaks(sid: str, body: PeaksRequest):
        session = _session(sid)
        graph = session.artifacts.get(body.graph)
        if not isinstance(graph, prototypes.DecisionGraph):
            raise HTTPException(404, f"unknown decision graph {body.graph!r}")
        try:
            labels = prototypes.density_peaks_assign(graph, body.selected)
        except ClusterlabError as exc:
            raise HTTPException(422, str(exc)) from exc
        truth = session.dataset.true_labels
        return {
            "labels": labels.tolist(),
            "n_clusters": n_clusters(labels),
            "n_noise": int(np.sum(labels == 0)),
            "scores": score_against_truth(labels, truth) if truth is not None else None,
        }

    @app.get("/sessions/{sid}/artifact/{key}")
    def artifact(sid: str, key: str):
        session = _session(sid)
        value = session.artifacts.get(key)
        if value is None:
            raise HTTPException(404, f"unknown artifact {key!r}")
        return serialize_artifact(value)

    return app


app = create_app()
