"""Module for storing and saving the results of experiments."""
import json
from dataclasses import asdict, dataclass, field, fields
from math import sqrt
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from jointnet.graphs import GraphEnsemble

FLOAT_FORMAT = "%.17g"


@dataclass
class TrialRecord:
    """Outcome of one trial of an experiment.

    ``recovered`` means ``rel_l1_error < 1e-5``. ``wall_time_ms`` is kept
    out of ``records.jsonl`` so that reruns produce identical files.
    """

    experiment_id: str
    seed: int
    N: int
    K: int
    n_signals: int | None = None
    cond1: bool | None = None
    gamma: float | None = None
    recovered: bool = False
    rel_l1_error: float = 0.0
    rel_fro_error_per_graph: list[float] = field(default_factory=list)
    epsilon_used: float | None = None
    wall_time_ms: float = 0.0
    trial: int = 0
    mode: str = "joint"
    status: str | None = None
    converged: bool = True
    abs_l1_error: float | None = None
    bound: float | None = None
    bound_holds: bool | None = None

    def to_dict(self, include_timing: bool = False) -> dict:
        record = asdict(self)
        if not include_timing:
            record.pop("wall_time_ms")
        return record

    @classmethod
    def from_dict(cls, record: dict) -> "TrialRecord":
        names = {item.name for item in fields(cls)}
        return cls(**{key: record[key] for key in record if key in names})


def recovery_error_l1(
    est: GraphEnsemble | Sequence[np.ndarray],
    truth: GraphEnsemble | Sequence[np.ndarray],
) -> float:
    """``sum_k ||S_hat_k - S_k||_1 / sum_k ||S_k||_1`` (entrywise norms)."""
    est, truth = _matrices(est), _matrices(truth)
    num = sum(
        float(np.abs(e - t).sum()) for e, t in zip(est, truth, strict=True)
    )
    denom = sum(float(np.abs(t).sum()) for t in truth)
    if denom == 0.0:
        raise ValueError("Ground truth must not be all zero. Got: 0.")
    return num / denom


def recovery_error_fro(est: np.ndarray, truth: np.ndarray) -> float:
    """``||S - S_hat||_F / ||S||_F`` of a single graph."""
    denom = float(np.linalg.norm(truth))
    if denom == 0.0:
        raise ValueError("Ground truth must not be all zero. Got: 0.")
    return float(np.linalg.norm(np.asarray(truth) - np.asarray(est))) / denom


def absolute_error_l1(
    est: GraphEnsemble | Sequence[np.ndarray],
    truth: GraphEnsemble | Sequence[np.ndarray],
) -> float:
    """``sum_k ||vec(S_hat_k - S_k)||_1``."""
    return sum(
        float(np.abs(e - t).sum())
        for e, t in zip(_matrices(est), _matrices(truth), strict=True)
    )


def decay_fit(summary: pd.DataFrame, fit_last: int = 2) -> dict:
    """Fit ``mean_error ~ C / sqrt(n)`` on the largest ``fit_last`` n.

    ``C_bound`` is the smallest constant with ``mean <= C / sqrt(n)`` on the
    fit set, ``C_lsq`` the least-squares constant.
    """
    joint = summary[summary["mode"] == "joint"].sort_values("n_signals")
    n_vals = joint["n_signals"].to_numpy(dtype=float)
    means = joint["mean_rel_l1_error"].to_numpy(dtype=float)
    fit_n, fit_mean = n_vals[-fit_last:], means[-fit_last:]
    inv_root = 1.0 / np.sqrt(fit_n)
    c_bound = float(np.max(fit_mean * np.sqrt(fit_n), initial=0.0))
    c_lsq = float(fit_mean @ inv_root / (inv_root @ inv_root))
    return {
        "C_bound": c_bound,
        "C_lsq": c_lsq,
        "fit_n": [int(n) for n in fit_n],
        "mean_rel_l1_error": {
            str(int(n)): float(m) for n, m in zip(n_vals, means, strict=True)
        },
        "strictly_decreasing": bool(np.all(np.diff(means) < 0)),
        "bound_holds": {
            str(int(n)): bool(m <= c_bound / sqrt(n))
            for n, m in zip(n_vals, means, strict=True)
        },
    }


@dataclass
class ExperimentResults:
    """Class for storing the trial records of a single experiment."""

    experiment_id: str
    records: list[TrialRecord] = field(default_factory=list)
    path: str = field(init=False, default="")

    def extend(self, records: Sequence[TrialRecord]) -> None:
        self.records.extend(records)

    def set_path(self, path: Path | str, verbose: bool = False) -> str:
        """Set path attribute and make corresponding folder."""
        out_dir = Path(path).resolve()
        self.path = str(out_dir)
        if not out_dir.is_dir():
            out_dir.mkdir(parents=True)
            if verbose:
                print(f"Creating folder: \n{out_dir}")
        return self.path

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for record in self.records:
            row = record.to_dict(include_timing=True)
            errors = row.pop("rel_fro_error_per_graph")
            row["mean_rel_fro_error"] = (
                float(np.mean(errors)) if errors else np.nan
            )
            rows.append(row)
        frame = pd.DataFrame(rows)
        for column in ("n_signals", "gamma", "epsilon_used"):
            if column in frame:
                frame[column] = pd.to_numeric(frame[column])
        return frame

    def summary(self) -> pd.DataFrame:
        """Aggregate records per (mode, N, K, n_signals) condition."""
        frame = self.to_frame()
        if frame.empty:
            return pd.DataFrame()
        keys = ["experiment_id", "mode", "N", "K", "n_signals"]
        grouped = frame.groupby(keys, dropna=False, sort=True)
        summary = grouped.agg(
            trials=("trial", "count"),
            mean_rel_l1_error=("rel_l1_error", "mean"),
            std_rel_l1_error=("rel_l1_error", "std"),
            mean_rel_fro_error=("mean_rel_fro_error", "mean"),
            recovered_rate=("recovered", "mean"),
            mean_epsilon=("epsilon_used", "mean"),
        ).reset_index()
        summary["std_rel_l1_error"] = summary["std_rel_l1_error"].fillna(0.0)
        return summary

    def histogram(self) -> pd.DataFrame:
        """Pairs ``(gamma, recovered)`` of every trial."""
        return pd.DataFrame(
            {
                "trial": [record.trial for record in self.records],
                "gamma": [record.gamma for record in self.records],
                "cond1": [record.cond1 for record in self.records],
                "recovered": [record.recovered for record in self.records],
            }
        )

    def save_records_jsonl(self) -> None:
        """Save one JSON object per record, in trial order."""
        with open(
            Path(self.path, "records.jsonl"), "w", encoding="utf-8"
        ) as file:
            for record in self.records:
                file.write(json.dumps(record.to_dict()) + "\n")

    def save_summary_csv(self) -> None:
        self.summary().to_csv(
            Path(self.path, "summary.csv"),
            index=False,
            float_format=FLOAT_FORMAT,
        )

    def save_histogram_csv(self) -> None:
        self.histogram().to_csv(
            Path(self.path, "histogram.csv"),
            index=False,
            float_format=FLOAT_FORMAT,
        )

    def save_timings_csv(self) -> None:
        pd.DataFrame(
            {
                "trial": [record.trial for record in self.records],
                "mode": [record.mode for record in self.records],
                "n_signals": [record.n_signals for record in self.records],
                "wall_time_ms": [
                    record.wall_time_ms for record in self.records
                ],
            }
        ).to_csv(Path(self.path, "timings.csv"), index=False)

    def save_fit_json(self, fit_last: int = 2) -> dict:
        fit = decay_fit(self.summary(), fit_last=fit_last)
        with open(Path(self.path, "fit.json"), "w", encoding="utf-8") as file:
            json.dump(fit, file, indent=2)
        return fit

    def save(
        self,
        path: Path | str,
        histogram: bool = False,
        fit: bool = False,
        timings: bool = False,
        verbose: bool = False,
    ) -> None:
        """Save results to given path."""
        self.set_path(path, verbose=verbose)
        self.save_records_jsonl()
        self.save_summary_csv()
        if histogram:
            self.save_histogram_csv()
        if fit:
            self.save_fit_json()
        if timings:
            self.save_timings_csv()
        if verbose:
            print(f"Saved {len(self.records)} records to: {self.path}")


def _matrices(
    ensemble: GraphEnsemble | Sequence[np.ndarray],
) -> list[np.ndarray]:
    if isinstance(ensemble, GraphEnsemble):
        return ensemble.matrices
    return [np.asarray(matrix, dtype=float) for matrix in ensemble]
