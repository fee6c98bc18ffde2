import json

import numpy as np
import pandas as pd
import pytest

from jointnet.exceptions import IsolatedAnchorNode
from jointnet.experiment import (
    ExperimentResults,
    TrialRecord,
    absolute_error_l1,
    decay_fit,
    recovery_error_fro,
    recovery_error_l1,
    reference_graph,
    run_bound_experiment,
    run_certificate_experiment,
    run_decay_experiment,
    run_joint_vs_separate,
    run_reference_subsets,
    run_trials,
    similar_ensemble,
    synthetic_reference_signals,
)
from jointnet.graphs import (
    GraphEnsemble,
    anchored_erdos_renyi,
    normalize_ensemble,
    random_weighted_graph,
)
from jointnet.rng import Experiment, make_rng
from jointnet.solvers import SolverConfig


def _records(records):
    return [record.to_dict() for record in records]


def test_error_measures():
    truth = [np.array([[0.0, 1.0], [1.0, 0.0]])]
    est = [np.array([[0.0, 0.5], [0.5, 0.0]])]
    assert recovery_error_l1(est, truth) == pytest.approx(0.5)
    assert absolute_error_l1(est, truth) == pytest.approx(1.0)
    assert recovery_error_fro(est[0], truth[0]) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        recovery_error_l1(est, [np.zeros((2, 2))])


def test_similar_ensemble_is_deterministic():
    first = similar_ensemble(10, 3, 0.3, 4, Experiment.DECAY, 2, q=0.3)
    second = similar_ensemble(10, 3, 0.3, 4, Experiment.DECAY, 2, q=0.3)
    for a, b in zip(first.graphs, second.graphs):
        assert a == b
    for matrix in first.matrices:
        assert matrix[:, 0].sum() == pytest.approx(1.0)
    assert first.beta == {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0}


def test_similar_ensemble_rewires():
    ensemble = similar_ensemble(
        12, 2, 0.3, 0, Experiment.CERTIFICATE, 0, rewires=2, anchor="first"
    )
    first, second = (set(graph.edges) for graph in ensemble.graphs)
    assert len(first - second) == 2
    assert ensemble.matrices[0][:, 0].sum() == pytest.approx(1.0)


def test_similar_ensemble_needs_one_rewiring_rule():
    with pytest.raises(ValueError):
        similar_ensemble(5, 2, 0.5, 0, Experiment.DECAY, 0)
    with pytest.raises(ValueError):
        similar_ensemble(5, 2, 0.5, 0, Experiment.DECAY, 0, rewires=1, q=0.1)


def test_run_trials_keeps_task_order():
    def trial_func(trial):
        return [TrialRecord("toy", 0, 2, 1, trial=trial)]

    records = run_trials(trial_func, [{"trial": t} for t in range(4)])
    assert [record.trial for record in records] == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        run_trials(trial_func, [])


def test_certificate_experiment_records():
    records = run_certificate_experiment(
        trials=5, N=8, p=0.3, rewires=1, seed0=1
    )
    assert len(records) == 5
    assert [record.trial for record in records] == list(range(5))
    for record in records:
        assert record.experiment_id == "certificate"
        assert record.status in (
            "certified",
            "indeterminate",
            "uncertified",
            "singular",
        )
        if record.status == "certified":
            assert record.recovered
        assert len(record.rel_fro_error_per_graph) == 2


def test_decay_experiment_is_reproducible_across_workers():
    kwargs = {
        "K": 2,
        "N": 6,
        "p": 0.5,
        "q": 0.3,
        "n_grid": (200,),
        "trials": 2,
        "seed0": 3,
    }
    serial = run_decay_experiment(n_jobs=1, **kwargs)
    parallel = run_decay_experiment(n_jobs=2, **kwargs)
    assert _records(serial) == _records(parallel)
    assert "wall_time_ms" not in serial[0].to_dict()
    assert "wall_time_ms" in serial[0].to_dict(include_timing=True)


def test_epsilon_shrinks_with_more_signals():
    records = run_decay_experiment(
        K=2, N=8, p=0.4, q=0.3, n_grid=(100, 10_000), trials=3, seed0=0
    )
    results = ExperimentResults("decay", records)
    summary = results.summary()
    assert list(summary["n_signals"]) == [100, 10_000]
    assert list(summary["trials"]) == [3, 3]
    eps = summary["mean_epsilon"].to_numpy()
    assert eps[1] < eps[0]


def test_joint_equals_separate_for_single_graph():
    graph = random_weighted_graph(6, 1.0, make_rng(2))
    graphs = GraphEnsemble(graphs=(graph,))
    records = run_joint_vs_separate(graphs, n_grid=(500,), trials=2)
    assert [record.mode for record in records] == [
        "joint",
        "separate",
        "joint",
        "separate",
    ]
    for joint, separate in zip(records[::2], records[1::2]):
        joint_dict, separate_dict = joint.to_dict(), separate.to_dict()
        joint_dict.pop("mode")
        separate_dict.pop("mode")
        assert joint_dict == separate_dict


def test_compare_requires_anchor():
    graphs = GraphEnsemble.from_matrices([np.zeros((4, 4))])
    with pytest.raises(IsolatedAnchorNode):
        run_joint_vs_separate(graphs, n_grid=(100,), trials=1)


def test_bound_experiment_holds():
    records = run_bound_experiment(
        trials=3, N=6, K=2, p=0.5, rewires=1, n_signals=1000, seed0=2
    )
    assert len(records) == 3
    for record in records:
        assert record.status == "bounded"
        assert record.bound_holds
        assert record.abs_l1_error <= record.bound


def test_results_save(tmp_path):
    records = run_decay_experiment(
        K=2, N=5, p=0.5, q=0.3, n_grid=(100, 300, 1000), trials=2
    )
    results = ExperimentResults("decay", records)
    results.save(tmp_path / "decay", histogram=True, timings=True)
    results.save_fit_json(fit_last=2)
    out = tmp_path / "decay"
    lines = (out / "records.jsonl").read_text().splitlines()
    assert len(lines) == 6
    assert "wall_time_ms" not in json.loads(lines[0])
    summary = pd.read_csv(out / "summary.csv")
    assert len(summary) == 3
    assert (out / "histogram.csv").is_file()
    timings = pd.read_csv(out / "timings.csv")
    assert "wall_time_ms" in timings
    fit = json.loads((out / "fit.json").read_text())
    assert fit["fit_n"] == [300, 1000]
    assert set(fit["mean_rel_l1_error"]) == {"100", "300", "1000"}


def test_decay_fit_constants():
    summary = pd.DataFrame(
        {
            "mode": ["joint"] * 3,
            "n_signals": [100, 400, 1600],
            "mean_rel_l1_error": [0.4, 0.1, 0.05],
        }
    )
    fit = decay_fit(summary, fit_last=2)
    assert fit["C_bound"] == pytest.approx(2.0)
    assert fit["strictly_decreasing"]
    assert fit["bound_holds"] == {"100": False, "400": True, "1600": True}
    inv = 1 / np.sqrt([400.0, 1600.0])
    expected = (0.1 * inv[0] + 0.05 * inv[1]) / (inv @ inv)
    assert fit["C_lsq"] == pytest.approx(expected)


def test_record_round_trip():
    record = TrialRecord(
        "bound", 1, 6, 2, n_signals=10, gamma=None, wall_time_ms=3.0
    )
    restored = TrialRecord.from_dict(record.to_dict())
    assert restored.wall_time_ms == 0.0
    assert restored.to_dict() == record.to_dict()


@pytest.mark.slow
def test_certified_trials_recover_exactly():
    records = run_certificate_experiment(trials=100, N=20, p=0.1, n_jobs=-1)
    certified = [r for r in records if r.status == "certified"]
    assert all(record.recovered for record in certified)


@pytest.mark.slow
def test_robust_error_respects_bound():
    records = run_bound_experiment(trials=50, n_jobs=-1)
    checked = [r for r in records if r.status == "bounded"]
    assert checked
    holding = np.mean([record.bound_holds for record in checked])
    assert holding >= 0.95


def test_reference_subsets_records():
    config = SolverConfig(smoothness_eta=0.5, max_iters=5000)
    records = run_reference_subsets(
        N=6, p=0.5, n_total=600, K=2, n_grid=(50,), trials=2, config=config
    )
    assert len(records) == 4
    assert [record.mode for record in records] == [
        "joint",
        "separate",
        "joint",
        "separate",
    ]
    for record in records:
        assert record.experiment_id == "reference"
        assert record.n_signals == 50
        assert record.K == 2
        assert np.isfinite(record.rel_l1_error)
    again = run_reference_subsets(
        N=6,
        p=0.5,
        n_total=600,
        K=2,
        n_grid=(50,),
        trials=2,
        config=config,
        n_jobs=2,
    )
    assert _records(again) == _records(records)


def test_reference_subsets_need_enough_signals():
    signals = synthetic_reference_signals(5, 0.5, 3, 100, 0)
    assert signals.shape == (5, 100)
    with pytest.raises(ValueError, match="Got: 120"):
        run_reference_subsets(signals, K=3, n_grid=(40,), trials=1)


def test_reference_graph_is_anchored_gso():
    signals = synthetic_reference_signals(5, 0.5, 3, 400, 1)
    plain = reference_graph(signals)
    weighted = reference_graph(
        signals, config=SolverConfig(smoothness_eta=2.0)
    )
    for matrix in (plain, weighted):
        np.testing.assert_allclose(matrix, matrix.T, atol=1e-12)
        assert np.all(np.diag(matrix) == 0.0)
        assert matrix[:, 0].sum() == pytest.approx(1.0, abs=1e-6)


def _joint_better_fraction(graphs, trials, n_grid):
    records = run_joint_vs_separate(
        graphs, n_grid=n_grid, trials=trials, n_jobs=-1
    )
    summary = ExperimentResults("compare", records).summary()
    errors = summary.pivot(
        index="n_signals", columns="mode", values="mean_rel_fro_error"
    )
    return float(np.mean(errors["joint"] <= errors["separate"]))


@pytest.mark.slow
def test_decay_is_strictly_decreasing():
    records = run_decay_experiment(
        K=2, N=20, p=0.4, q=0.3, trials=10, n_jobs=-1
    )
    assert all(record.converged for record in records)
    fit = decay_fit(ExperimentResults("decay", records).summary())
    assert fit["strictly_decreasing"]
    assert fit["bound_holds"]["1000"]
    assert fit["bound_holds"]["10000"]


@pytest.mark.slow
def test_joint_beats_separate_on_rewired_triple():
    graphs = similar_ensemble(
        12, 3, 0.3, 0, Experiment.COMPARE, 0, rewires=2
    )
    fraction = _joint_better_fraction(graphs, 20, (100, 1_000, 10_000))
    assert fraction >= 0.7


@pytest.mark.slow
def test_separate_beats_joint_on_independent_triple():
    graphs = [
        anchored_erdos_renyi(12, 0.3, 0, Experiment.COMPARE, k)[0].weights
        for k in range(3)
    ]
    ensemble = normalize_ensemble(
        GraphEnsemble.from_matrices(graphs), per_graph=True
    )
    fraction = _joint_better_fraction(ensemble, 20, (100, 1_000, 10_000))
    assert 1.0 - fraction >= 0.7


@pytest.mark.slow
def test_records_identical_across_worker_counts():
    kwargs = {"trials": 16, "N": 10, "p": 0.3, "rewires": 2, "seed0": 4}
    serial = run_certificate_experiment(n_jobs=1, **kwargs)
    parallel = run_certificate_experiment(n_jobs=8, **kwargs)
    assert json.dumps(_records(serial)) == json.dumps(_records(parallel))
