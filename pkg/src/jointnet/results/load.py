"""Module for loading matrices, ensembles and records from disk."""
import json
import warnings
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd

from jointnet.exceptions import (
    AnchorWarning,
    DataFileError,
    IsolatedAnchorNode,
)
from jointnet.experiment import TrialRecord
from jointnet.graphs import GraphEnsemble, normalize_ensemble
from jointnet.operators.problem import AnchorMode

GraphFormat = Literal["auto", "dense", "edges"]

MANIFEST_KEYS = ("n_nodes", "k_graphs")


def load_matrix(
    path: Path | str,
    n_nodes: int | None = None,
    graph_format: GraphFormat = "auto",
) -> np.ndarray:
    """Read a dense CSV matrix or a 1-based ``i,j,weight`` edge list.

    With ``graph_format='auto'`` a file is read as an edge list when it
    has three columns whose first two are integers of at least 1. A GSO in
    dense form has a zero in its first entry, so it is never mistaken for
    an edge list.
    """
    data = _read_csv(path)
    if graph_format == "auto":
        graph_format = "edges" if _looks_like_edges(data) else "dense"
    if graph_format == "edges":
        return _edges_to_matrix(data, n_nodes, path)
    if graph_format != "dense":
        raise ValueError(
            "`graph_format` must be one of `auto`, `dense` or `edges`. Got:"
            f" {graph_format}."
        )
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise DataFileError(
            str(path), f"Matrix file must hold a square matrix ({data.shape})."
        )
    if n_nodes is not None and data.shape[0] != n_nodes:
        raise DataFileError(
            str(path), f"Matrix file must hold {n_nodes} rows and columns."
        )
    return data


def load_signals(
    path: Path | str, n_nodes: int | None = None
) -> np.ndarray:
    """Read an ``N x n`` signal matrix, one column per observation."""
    data = _read_csv(path)
    if n_nodes is not None and data.shape[0] != n_nodes:
        raise DataFileError(
            str(path), f"Signal file must hold {n_nodes} rows."
        )
    return data


def read_manifest(path: Path | str) -> dict:
    """Read an ensemble manifest and resolve its file paths.

    Only ``n_nodes`` and ``k_graphs`` are required; ``graph_files``,
    ``signal_files`` and ``covariance_files`` list one file per graph.
    Graph indices in ``beta`` entries ``{"k": ..., "kp": ..., "w": ...}``
    are 1-based. Paths are taken relative to the manifest's folder.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as file:
            manifest = json.load(file)
    except (OSError, json.JSONDecodeError) as error:
        raise DataFileError(
            str(path), f"Could not read manifest ({error})."
        ) from error
    missing = [key for key in MANIFEST_KEYS if key not in manifest]
    if missing:
        raise DataFileError(
            str(path), f"Manifest misses the fields {missing}."
        )
    for key in ("graph_files", "signal_files", "covariance_files"):
        if key in manifest:
            if len(manifest[key]) != manifest["k_graphs"]:
                raise DataFileError(
                    str(path),
                    f"`{key}` must list {manifest['k_graphs']} files.",
                )
            manifest[key] = [
                str(path.parent / name) for name in manifest[key]
            ]
    return manifest


def load_ensemble(
    path: Path | str, normalize: AnchorMode | None = None
) -> GraphEnsemble:
    """Load the graphs and objective weights listed in a manifest.

    With ``normalize`` set the ensemble is scale-normalized for that
    anchor mode. An ensemble with an isolated anchor node is returned as
    stored and an :class:`AnchorWarning` is issued.
    """
    manifest = read_manifest(path)
    if "graph_files" not in manifest:
        raise DataFileError(str(path), "Manifest lists no graph files.")
    n_nodes = manifest["n_nodes"]
    matrices = [
        load_matrix(name, n_nodes, manifest.get("graph_format", "auto"))
        for name in manifest["graph_files"]
    ]
    beta = {
        (entry["k"] - 1, entry["kp"] - 1): entry["w"]
        for entry in manifest.get("beta", [])
    }
    ensemble = GraphEnsemble.from_matrices(
        matrices, alpha=manifest.get("alpha"), beta=beta
    )
    if normalize is None:
        return ensemble
    try:
        return normalize_ensemble(ensemble, per_graph=normalize == "each")
    except IsolatedAnchorNode as error:
        warnings.warn(
            f"Ensemble in {path} is not normalized: {error}", AnchorWarning
        )
        return ensemble


def load_manifest_signals(path: Path | str) -> list[np.ndarray]:
    """Load the signal files listed in a manifest, one per graph."""
    manifest = read_manifest(path)
    if "signal_files" not in manifest:
        raise DataFileError(str(path), "Manifest lists no signal files.")
    return [
        load_signals(name, manifest["n_nodes"])
        for name in manifest["signal_files"]
    ]


def load_manifest_covariances(path: Path | str) -> list[np.ndarray]:
    """Load the covariance files listed in a manifest, one per graph."""
    manifest = read_manifest(path)
    if "covariance_files" not in manifest:
        raise DataFileError(str(path), "Manifest lists no covariance files.")
    return [
        load_matrix(name, manifest["n_nodes"], "dense")
        for name in manifest["covariance_files"]
    ]


def load_records(path: Path | str) -> list[TrialRecord]:
    """Load trial records from a ``records.jsonl`` file."""
    try:
        with open(path, "r", encoding="utf-8") as file:
            return [
                TrialRecord.from_dict(json.loads(line))
                for line in file
                if line.strip()
            ]
    except (OSError, json.JSONDecodeError) as error:
        raise DataFileError(
            str(path), f"Could not read records ({error})."
        ) from error


def load_json(path: Path | str) -> dict:
    """Load a report or solution JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as file:
            return json.load(file)
    except (OSError, json.JSONDecodeError) as error:
        raise DataFileError(
            str(path), f"Could not read JSON file ({error})."
        ) from error


def _read_csv(path: Path | str) -> np.ndarray:
    try:
        data = pd.read_csv(
            path, header=None, dtype=float, float_precision="round_trip"
        )
    except pd.errors.EmptyDataError:
        return np.empty((0, 3))
    except (OSError, ValueError) as error:
        raise DataFileError(
            str(path), f"Could not read CSV file ({error})."
        ) from error
    return data.to_numpy()


def _looks_like_edges(data: np.ndarray) -> bool:
    if data.ndim != 2 or data.shape[1] != 3:
        return False
    if data.shape[0] == 0:
        return True
    index = data[:, :2]
    return bool(np.all(index == np.round(index)) and np.all(index >= 1))


def _edges_to_matrix(
    data: np.ndarray, n_nodes: int | None, path: Path | str
) -> np.ndarray:
    if data.shape[1] != 3:
        raise DataFileError(
            str(path), "Edge list must have the columns i, j, weight."
        )
    rows = data[:, 0].astype(int) - 1
    cols = data[:, 1].astype(int) - 1
    if n_nodes is None:
        if data.shape[0] == 0:
            raise DataFileError(
                str(path), "Empty edge list needs a node count."
            )
        n_nodes = int(max(rows.max(), cols.max())) + 1
    if data.shape[0] and (
        min(rows.min(), cols.min()) < 0
        or max(rows.max(), cols.max()) >= n_nodes
    ):
        raise DataFileError(
            str(path), f"Edge list indices must lie in 1..{n_nodes}."
        )
    matrix = np.zeros((n_nodes, n_nodes))
    matrix[rows, cols] = data[:, 2]
    matrix[cols, rows] = data[:, 2]
    return matrix
