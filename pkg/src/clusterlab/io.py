"""CSV ingestion and the on-disk artifact formats.

CSV: comma separator, '.' decimal, UTF-8, LF. JSON: UTF-8, sorted keys.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .dataset import Dataset, make_dataset
from .errors import EmptyFile, ParseError
from .hierarchy import CondensedTree, MergeHierarchy


def _parse_rows(
    text: str, has_header: bool, label_column: Optional[Union[str, int]]
) -> Dataset:
    reader = csv.reader(_io.StringIO(text))
    raw = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not raw:
        raise EmptyFile("no rows")
    header: Optional[list[str]] = None
    if has_header:
        header = [c.strip() for c in raw[0]]
        raw = raw[1:]
        if not raw:
            raise EmptyFile("header only, no data rows")
    width = len(raw[0])
    label_idx: Optional[int] = None
    if label_column is not None:
        if isinstance(label_column, int) or str(label_column).lstrip("-").isdigit():
            label_idx = int(label_column)
            if label_idx < 0:
                label_idx += width
        elif header is not None and label_column in header:
            label_idx = header.index(label_column)
        else:
            raise ParseError(0, 0, f"label column {label_column!r} not found")
    rows, classes = [], []
    class_ids: dict[str, int] = {}
    for r, row in enumerate(raw):
        if len(row) != width:
            raise ParseError(r + 1 + int(has_header), len(row), "ragged row")
        values = []
        for c, cell in enumerate(row):
            cell = cell.strip()
            if c == label_idx:
                classes.append(class_ids.setdefault(cell, len(class_ids) + 1))
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(
                    r + 1 + int(has_header), c + 1, f"not a number: {cell!r}"
                ) from None
        rows.append(values)
    names = None
    if header is not None:
        names = [h for i, h in enumerate(header) if i != label_idx]
    return make_dataset(rows, names, classes if label_idx is not None else None)


def ingest_csv(
    path: Union[str, Path],
    has_header: bool = True,
    label_column: Optional[Union[str, int]] = None,
) -> Dataset:
    """Read a numeric CSV; the optional label column maps class names to
    integers 1..c by first appearance."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise EmptyFile(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise EmptyFile(str(path))
    return _parse_rows(text, has_header, label_column)


def parse_csv_text(
    text: str,
    has_header: bool = True,
    label_column: Optional[Union[str, int]] = None,
) -> Dataset:
    if not text.strip():
        raise EmptyFile("empty body")
    return _parse_rows(text, has_header, label_column)


def write_dataset_csv(dataset: Dataset, path: Union[str, Path]) -> None:
    lines = [",".join(list(dataset.feature_names)
                      + (["class"] if dataset.true_labels is not None else []))]
    for i in range(dataset.n):
        cells = [repr(float(v)) for v in dataset.points[i]]
        if dataset.true_labels is not None:
            cells.append(str(int(dataset.true_labels[i])))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_labels_csv(labels: np.ndarray, path: Union[str, Path]) -> None:
    lines = ["point_index,label"]
    lines += [f"{i},{int(l)}" for i, l in enumerate(labels)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(obj: dict, path: Union[str, Path]) -> None:
    Path(path).write_text(
        json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def hierarchy_to_json_dict(h: MergeHierarchy) -> dict:
    return {
        "n": h.n_leaves,
        "columns": ["a", "b", "height", "size"],
        "rows": [
            [int(a), int(b), float(height), int(size)]
            for a, b, height, size in h.rows
        ],
    }


def hierarchy_to_csv(h: MergeHierarchy, path: Union[str, Path]) -> None:
    lines = ["a,b,height,size"]
    lines += [
        f"{int(a)},{int(b)},{repr(float(height))},{int(size)}"
        for a, b, height, size in h.rows
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def condensed_tree_to_json_dict(tree: CondensedTree) -> dict:
    return {
        "n_points": tree.n_points,
        "min_cluster_size": tree.min_cluster_size,
        "columns": ["parent", "child", "child_is_cluster", "lambda", "size"],
        "rows": [
            # strict JSON has no Infinity; zero-height merges map to null
            [int(p), int(c), bool(ic), float(l) if np.isfinite(l) else None, int(s)]
            for p, c, ic, l, s in zip(
                tree.parent, tree.child, tree.child_is_cluster, tree.lam, tree.size
            )
        ],
    }


def embedding_to_csv(embedding: np.ndarray, path: Union[str, Path]) -> None:
    k = embedding.shape[1]
    lines = [",".join(f"e{i}" for i in range(k))]
    lines += [",".join(repr(float(v)) for v in row) for row in embedding]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def serialize_artifact(value):
    """JSON-ready form of any runner artifact object."""
    from .density import WeightedEdgeSet
    from .prototypes import DecisionGraph

    if isinstance(value, MergeHierarchy):
        return hierarchy_to_json_dict(value)
    if isinstance(value, CondensedTree):
        return condensed_tree_to_json_dict(value)
    if isinstance(value, DecisionGraph):
        return value.to_json_dict()
    if isinstance(value, WeightedEdgeSet):
        return value.to_json_dict()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value
