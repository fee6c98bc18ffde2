"""Module for writing matrices, manifests and reports to disk."""
import json
from math import isfinite
from pathlib import Path
from typing import Any, Literal, Sequence

import numpy as np
import pandas as pd

from jointnet.graphs import GraphEnsemble, beta_pairs
from jointnet.solvers import Solution

FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Convert numpy values to builtins and non-finite floats to None."""
    if hasattr(value, "to_dict"):
        value = value.to_dict()
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if isfinite(value) else None
    return value


def save_json(value: Any, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as file:
        json.dump(to_jsonable(value), file, indent=2)
    return path


def save_matrix(
    matrix: np.ndarray,
    path: Path | str,
    graph_format: Literal["dense", "edges"] = "dense",
) -> Path:
    """Write a matrix as dense CSV or as a 1-based ``i,j,weight`` list.

    Edge lists hold every nonzero entry with ``i < j`` once.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix = np.asarray(matrix, dtype=float)
    if graph_format == "edges":
        rows, cols = np.nonzero(np.triu(matrix, k=1))
        data = pd.DataFrame(
            {"i": rows + 1, "j": cols + 1, "w": matrix[rows, cols]}
        )
    elif graph_format == "dense":
        data = pd.DataFrame(matrix)
    else:
        raise ValueError(
            "`graph_format` must be one of `dense` or `edges`. Got:"
            f" {graph_format}."
        )
    data.to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)
    return path


def save_ensemble(
    ensemble: GraphEnsemble,
    out_dir: Path | str,
    signals: Sequence[np.ndarray] | None = None,
    graph_format: Literal["dense", "edges"] = "dense",
    extra: dict | None = None,
) -> Path:
    """Write graphs, optional signals and a manifest; return its path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph_files = []
    for k, matrix in enumerate(ensemble.matrices, start=1):
        name = f"graph_{k}.csv"
        save_matrix(matrix, out_dir / name, graph_format)
        graph_files.append(name)
    manifest = {
        "n_nodes": ensemble.n_nodes,
        "k_graphs": ensemble.k_graphs,
        "graph_format": graph_format,
        "graph_files": graph_files,
        "alpha": ensemble.alpha,
        "beta": [
            {"k": k + 1, "kp": kp + 1, "w": ensemble.beta[(k, kp)]}
            for k, kp in beta_pairs(ensemble.k_graphs)
            if (k, kp) in ensemble.beta
        ],
    }
    if signals is not None:
        manifest["signal_files"] = []
        for k, data in enumerate(signals, start=1):
            name = f"signals_{k}.csv"
            save_matrix(data, out_dir / name)
            manifest["signal_files"].append(name)
    manifest.update(extra or {})
    return save_json(manifest, out_dir / "manifest.json")


def save_solution(
    solution: Solution,
    out_dir: Path | str,
    extra: dict | None = None,
) -> Path:
    """Write estimated GSOs as CSV and the solver summary as JSON."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    shift_files = []
    for k, matrix in enumerate(solution.matrices, start=1):
        name = f"shift_{k}.csv"
        save_matrix(matrix, out_dir / name)
        shift_files.append(name)
    summary = solution.to_dict()
    summary["shift_files"] = shift_files
    summary.update(extra or {})
    return save_json(summary, out_dir / "solution.json")


def save_report(report: Any, path: Path | str) -> Path:
    """Write a certificate or bound report as JSON."""
    return save_json(report, path)

