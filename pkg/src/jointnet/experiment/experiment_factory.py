"""Module for running seeded synthetic experiments."""
import warnings
from time import perf_counter
from typing import Callable, Literal, Sequence

import numpy as np
from joblib import Parallel, delayed
from threadpoolctl import threadpool_limits

from jointnet.certificates import (
    support_rank_condition,
    theorem1_check,
    theorem2_bound,
)
from jointnet.exceptions import (
    BoundWarning,
    EmptySupport,
    IsolatedAnchorNode,
    RankDeficientM,
    SingularSystem,
)
from jointnet.experiment.experiment_base import (
    TrialRecord,
    absolute_error_l1,
    recovery_error_fro,
    recovery_error_l1,
)
from jointnet.graphs import (
    CovarianceSet,
    GraphEnsemble,
    beta_preset,
    ensemble_covariances,
    normalize_ensemble,
    random_filter,
    rewire_count,
    SignalEnsemble,
    anchored_erdos_renyi,
    rewire_prob,
    sample_ensemble_signals,
    signal_covariances,
    signal_distances,
    signal_subsets,
)
from jointnet.operators import (
    build_Phi,
    build_Psi,
    build_Psi_weighted,
    build_reduced,
)
from jointnet.operators.problem import AnchorMode
from jointnet.rng import Experiment, Stream, make_rng
from jointnet.solvers import (
    Solution,
    SolverConfig,
    choose_epsilon,
    combine_solutions,
    solve_noiseless,
    solve_robust,
    solve_separate,
)
from jointnet.solvers.solver_factory import EpsilonStrategy

RECOVERY_TOL = 1e-5
MAX_REWIRE_ATTEMPTS = 100


def run_trials(
    trial_func: Callable[..., list[TrialRecord]],
    tasks: Sequence[dict],
    n_jobs: int = 1,
) -> list[TrialRecord]:
    """Run trials on a worker pool and merge records in task order."""
    if not tasks:
        raise ValueError("No trials specified.")
    if len(tasks) == 1 or n_jobs in (0, 1):
        outputs = [trial_func(**task) for task in tasks]
    else:
        outputs = Parallel(n_jobs=n_jobs)(
            delayed(trial_func)(**task) for task in tasks
        )
    return [record for output in outputs for record in output]


def similar_ensemble(
    n_nodes: int,
    k_graphs: int,
    p: float,
    seed: int,
    experiment: Experiment,
    trial: int,
    rewires: int | None = None,
    q: float | None = None,
    anchor: AnchorMode = "each",
) -> GraphEnsemble:
    """Erdős–Rényi graph plus ``k_graphs - 1`` rewired copies of it.

    Copies are rewired by moving ``rewires`` edges, or every edge with
    probability ``q``. With ``anchor='each'`` a copy whose node 1 ends up
    isolated is redrawn from the next rewiring stream. The returned
    ensemble is scale-normalized for the given anchor mode.
    """
    if (rewires is None) == (q is None):
        raise ValueError(
            "Exactly one of `rewires` and `q` must be given. Got:"
            f" {rewires}, {q}."
        )
    graph, _ = anchored_erdos_renyi(
        n_nodes, p, seed, experiment, trial, Stream.GRAPH
    )
    graphs = [graph]
    for k in range(1, k_graphs):
        for attempt in range(MAX_REWIRE_ATTEMPTS):
            rng = make_rng(seed, experiment, trial, Stream.REWIRE, k, attempt)
            if rewires is not None:
                copy = rewire_count(graph, rewires, rng)
            else:
                copy = rewire_prob(graph, q, rng)
            if anchor == "first" or copy.weights[:, 0].sum() != 0.0:
                break
        else:
            raise IsolatedAnchorNode(k)
        graphs.append(copy)
    ensemble = GraphEnsemble(
        graphs=tuple(graphs), beta=beta_preset(k_graphs, "complete")
    )
    return normalize_ensemble(ensemble, per_graph=anchor == "each")


def trial_covariances(
    truth: GraphEnsemble,
    n_taps: int,
    seed: int,
    experiment: Experiment,
    trial: int,
) -> CovarianceSet:
    """Model covariances of ``truth`` under per-trial random filters."""
    filters = [
        random_filter(
            n_taps, make_rng(seed, experiment, trial, Stream.FILTER, k)
        )
        for k in range(truth.k_graphs)
    ]
    return CovarianceSet(
        tuple(ensemble_covariances(truth, filters)), kind="model"
    )


def trial_signals(
    model: CovarianceSet,
    n_signals: int,
    seed: int,
    experiment: Experiment,
    trial: int,
) -> SignalEnsemble:
    """``n_signals`` signals per graph drawn from its model covariance."""
    seeds = [
        make_rng(seed, experiment, trial, Stream.SIGNALS, n_signals, k)
        for k in range(model.k_graphs)
    ]
    return sample_ensemble_signals(model, n_signals, seeds)


def trial_sample_covariances(
    model: CovarianceSet,
    n_signals: int,
    seed: int,
    experiment: Experiment,
    trial: int,
) -> CovarianceSet:
    """Sample covariances of ``n_signals`` signals drawn per graph."""
    return signal_covariances(
        trial_signals(model, n_signals, seed, experiment, trial)
    )


def run_certificate_experiment(
    trials: int = 100,
    N: int = 20,
    p: float = 0.1,
    rewires: int = 3,
    L: int = 3,
    seed0: int = 0,
    k_graphs: int = 2,
    alpha: float = 1.0,
    beta: float = 1.0,
    anchor: AnchorMode = "each",
    config: SolverConfig | None = None,
    n_jobs: int = 1,
    verbose: bool = False,
) -> list[TrialRecord]:
    """Check exact recovery against the certificate on rewired pairs.

    Every trial draws a graph and ``k_graphs - 1`` copies with ``rewires``
    moved edges, random filters with ``L`` taps and exact model
    covariances, then runs the certificate check and the noiseless solver.
    """
    tasks = [
        {
            "trial": trial,
            "n_nodes": N,
            "k_graphs": k_graphs,
            "p": p,
            "rewires": rewires,
            "n_taps": L,
            "seed": seed0,
            "alpha": alpha,
            "beta": beta,
            "anchor": anchor,
            "config": config or SolverConfig(),
            "verbose": verbose,
        }
        for trial in range(trials)
    ]
    return run_trials(_certificate_trial, tasks, n_jobs)


def run_decay_experiment(
    K: int = 2,
    N: int = 20,
    p: float = 0.4,
    q: float = 0.3,
    n_grid: Sequence[int] = (100, 1_000, 10_000),
    trials: int = 10,
    seed0: int = 0,
    L: int = 3,
    alpha: float = 1.0,
    beta: float = 1.0,
    anchor: AnchorMode = "each",
    epsilon_strategy: EpsilonStrategy = "min-feasible",
    config: SolverConfig | None = None,
    n_jobs: int = 1,
    verbose: bool = False,
) -> list[TrialRecord]:
    """Error of the robust program as the number of signals grows.

    Graphs and filters depend on the trial only, so every trial traces the
    error of one instance along ``n_grid``.
    """
    tasks = [
        {
            "trial": trial,
            "n_signals": int(n_signals),
            "n_nodes": N,
            "k_graphs": K,
            "p": p,
            "q": q,
            "n_taps": L,
            "seed": seed0,
            "alpha": alpha,
            "beta": beta,
            "anchor": anchor,
            "epsilon_strategy": epsilon_strategy,
            "config": config or SolverConfig(),
            "verbose": verbose,
        }
        for n_signals in n_grid
        for trial in range(trials)
    ]
    return run_trials(_decay_trial, tasks, n_jobs)


def run_joint_vs_separate(
    graphs: GraphEnsemble,
    n_grid: Sequence[int] = (100, 1_000, 10_000),
    trials: int = 20,
    seed0: int = 0,
    L: int = 3,
    anchor: AnchorMode = "each",
    epsilon_strategy: EpsilonStrategy = "min-feasible",
    config: SolverConfig | None = None,
    n_jobs: int = 1,
    verbose: bool = False,
) -> list[TrialRecord]:
    """Compare joint and separate robust inference on given graphs.

    Each ``(n, trial)`` yields one ``joint`` and one ``separate`` record.
    The weights of ``graphs`` are used by the joint program; the separate
    program uses the sparsity weights only.
    """
    tasks = [
        {
            "trial": trial,
            "n_signals": int(n_signals),
            "graphs": graphs,
            "n_taps": L,
            "seed": seed0,
            "anchor": anchor,
            "epsilon_strategy": epsilon_strategy,
            "config": config or SolverConfig(),
            "verbose": verbose,
        }
        for n_signals in n_grid
        for trial in range(trials)
    ]
    return run_trials(_compare_trial, tasks, n_jobs)


def run_bound_experiment(
    trials: int = 50,
    N: int = 20,
    K: int = 2,
    p: float = 0.1,
    rewires: int = 3,
    n_signals: int = 10_000,
    seed0: int = 0,
    L: int = 3,
    anchor: AnchorMode = "each",
    config: SolverConfig | None = None,
    n_jobs: int = 1,
    verbose: bool = False,
) -> list[TrialRecord]:
    """Compare the robust error with its bound at ``eps = ||M s*_L||``."""
    tasks = [
        {
            "trial": trial,
            "n_signals": n_signals,
            "n_nodes": N,
            "k_graphs": K,
            "p": p,
            "rewires": rewires,
            "n_taps": L,
            "seed": seed0,
            "anchor": anchor,
            "config": config or SolverConfig(),
            "verbose": verbose,
        }
        for trial in range(trials)
    ]
    return run_trials(_bound_trial, tasks, n_jobs)


def run_reference_subsets(
    signals: np.ndarray | None = None,
    K: int = 3,
    n_grid: Sequence[int] = (100, 1_000),
    trials: int = 20,
    seed0: int = 0,
    N: int = 20,
    p: float = 0.2,
    L: int = 3,
    n_total: int = 10_000,
    alpha: float = 1.0,
    beta: float = 1.0,
    anchor: AnchorMode = "each",
    epsilon_strategy: EpsilonStrategy = "min-feasible",
    config: SolverConfig | None = None,
    n_jobs: int = 1,
    verbose: bool = False,
) -> list[TrialRecord]:
    """Joint and separate inference on random subsets of one signal set.

    A reference graph is inferred from all of ``signals`` by the robust
    program on its own. Every ``(n, trial)`` then splits ``K * n`` randomly
    chosen signals into ``K`` disjoint subsets, infers the ``K`` graphs
    jointly and separately, and scores both against the reference. With
    ``config.smoothness_eta > 0`` the sparsity terms are weighted by the
    node distances of every subset, and of the full set for the reference.

    Without ``signals``, ``n_total`` signals are drawn from an Erdős–Rényi
    graph on ``N`` nodes under a random filter with ``L`` taps.
    """
    config = config or SolverConfig()
    if signals is None:
        signals = synthetic_reference_signals(N, p, L, n_total, seed0)
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    if K * max(n_grid) > signals.shape[1]:
        raise ValueError(
            f"`K * max(n_grid)` must not exceed the {signals.shape[1]}"
            f" available signals. Got: {K * max(n_grid)}."
        )
    reference = reference_graph(signals, alpha, epsilon_strategy, config)
    tasks = [
        {
            "trial": trial,
            "n_signals": int(n_signals),
            "signals": signals,
            "reference": reference,
            "k_graphs": K,
            "seed": seed0,
            "alpha": alpha,
            "beta": beta,
            "anchor": anchor,
            "epsilon_strategy": epsilon_strategy,
            "config": config,
            "verbose": verbose,
        }
        for n_signals in n_grid
        for trial in range(trials)
    ]
    return run_trials(_reference_trial, tasks, n_jobs)


def synthetic_reference_signals(
    n_nodes: int, p: float, n_taps: int, n_total: int, seed: int
) -> np.ndarray:
    """Signals on one random graph, a stand-in for a recorded data set."""
    experiment = Experiment.REFERENCE
    graph, _ = anchored_erdos_renyi(
        n_nodes, p, seed, experiment, 0, Stream.GRAPH
    )
    truth = normalize_ensemble(GraphEnsemble(graphs=(graph,)))
    model = trial_covariances(truth, n_taps, seed, experiment, 0)
    return trial_signals(model, n_total, seed, experiment, 0).signals[0]


def reference_graph(
    signals: np.ndarray,
    alpha: float = 1.0,
    epsilon_strategy: EpsilonStrategy = "min-feasible",
    config: SolverConfig | None = None,
) -> np.ndarray:
    """GSO inferred from all ``signals`` by the single-graph program."""
    config = config or SolverConfig()
    ensemble = SignalEnsemble((signals,))
    sample = signal_covariances(ensemble)
    epsilon = choose_epsilon(
        build_reduced(sample, build_Psi([alpha], [], 1, ensemble.n_nodes)),
        epsilon_strategy,
        covariances=sample,
        n_total=ensemble.n_total,
    )
    solution = solve_separate(
        sample,
        config,
        "robust",
        alpha=[alpha],
        epsilons=[epsilon],
        distances=signal_distances(ensemble),
    )[0]
    return solution.matrices[0]


def _certificate_trial(
    trial: int,
    n_nodes: int,
    k_graphs: int,
    p: float,
    rewires: int,
    n_taps: int,
    seed: int,
    alpha: float,
    beta: float,
    anchor: AnchorMode,
    config: SolverConfig,
    verbose: bool,
) -> list[TrialRecord]:
    with threadpool_limits(limits=1):
        start = perf_counter()
        experiment = Experiment.CERTIFICATE
        truth = similar_ensemble(
            n_nodes,
            k_graphs,
            p,
            seed,
            experiment,
            trial,
            rewires=rewires,
            anchor=anchor,
        )
        covs = trial_covariances(truth, n_taps, seed, experiment, trial)
        psi = build_Psi(
            np.full(k_graphs, alpha),
            np.full(k_graphs * (k_graphs - 1) // 2, beta),
            k_graphs,
            n_nodes,
        )
        problem = build_Phi(covs, psi, anchor)
        s_star = truth.stack()
        cond1 = support_rank_condition(problem, s_star)
        try:
            report = theorem1_check(problem, s_star)
            gamma, status = report.gamma_noiseless, report.status
        except SingularSystem:
            gamma, status = None, "singular"
        solution = solve_noiseless(problem, config)
        error = recovery_error_l1(solution.shifts, truth)
        record = TrialRecord(
            experiment_id="certificate",
            seed=seed,
            N=n_nodes,
            K=k_graphs,
            cond1=cond1,
            gamma=gamma,
            recovered=error < RECOVERY_TOL,
            rel_l1_error=error,
            rel_fro_error_per_graph=_fro_errors(solution, truth),
            wall_time_ms=1e3 * (perf_counter() - start),
            trial=trial,
            status=status,
            converged=solution.converged,
        )
    _print_record(record, verbose)
    return [record]


def _decay_trial(
    trial: int,
    n_signals: int,
    n_nodes: int,
    k_graphs: int,
    p: float,
    q: float,
    n_taps: int,
    seed: int,
    alpha: float,
    beta: float,
    anchor: AnchorMode,
    epsilon_strategy: EpsilonStrategy,
    config: SolverConfig,
    verbose: bool,
) -> list[TrialRecord]:
    with threadpool_limits(limits=1):
        start = perf_counter()
        experiment = Experiment.DECAY
        truth = similar_ensemble(
            n_nodes, k_graphs, p, seed, experiment, trial, q=q, anchor=anchor
        )
        model = trial_covariances(truth, n_taps, seed, experiment, trial)
        sample = trial_sample_covariances(
            model, n_signals, seed, experiment, trial
        )
        psi = build_Psi(
            np.full(k_graphs, alpha),
            np.full(k_graphs * (k_graphs - 1) // 2, beta),
            k_graphs,
            n_nodes,
        )
        reduced = build_reduced(sample, psi, anchor)
        epsilon = choose_epsilon(
            reduced,
            epsilon_strategy,
            covariances=sample,
            n_total=n_signals * k_graphs,
        )
        solution = solve_robust(reduced, config, epsilon=epsilon)
        error = recovery_error_l1(solution.shifts, truth)
        record = TrialRecord(
            experiment_id="decay",
            seed=seed,
            N=n_nodes,
            K=k_graphs,
            n_signals=n_signals,
            recovered=error < RECOVERY_TOL,
            rel_l1_error=error,
            rel_fro_error_per_graph=_fro_errors(solution, truth),
            epsilon_used=epsilon,
            wall_time_ms=1e3 * (perf_counter() - start),
            trial=trial,
            converged=solution.converged,
        )
    _print_record(record, verbose)
    return [record]


def _compare_trial(
    trial: int,
    n_signals: int,
    graphs: GraphEnsemble,
    n_taps: int,
    seed: int,
    anchor: AnchorMode,
    epsilon_strategy: EpsilonStrategy,
    config: SolverConfig,
    verbose: bool,
) -> list[TrialRecord]:
    with threadpool_limits(limits=1):
        start = perf_counter()
        experiment = Experiment.COMPARE
        n_nodes, k_graphs = graphs.n_nodes, graphs.k_graphs
        truth = normalize_ensemble(graphs, per_graph=anchor == "each")
        model = trial_covariances(truth, n_taps, seed, experiment, trial)
        sample = trial_sample_covariances(
            model, n_signals, seed, experiment, trial
        )
        psi = build_Psi(truth.alpha, truth.beta, k_graphs, n_nodes)
        reduced = build_reduced(sample, psi, anchor)
        epsilon = choose_epsilon(
            reduced,
            epsilon_strategy,
            covariances=sample,
            n_total=n_signals * k_graphs,
        )
        joint = solve_robust(reduced, config, epsilon=epsilon)
        joint_ms = 1e3 * (perf_counter() - start)

        start = perf_counter()
        separate = combine_solutions(
            solve_separate(
                sample,
                config,
                "robust",
                alpha=truth.alpha,
                epsilons=_separate_epsilons(
                    sample, truth.alpha, epsilon_strategy, n_signals
                ),
            )
        )
        separate_ms = 1e3 * (perf_counter() - start)
        truth_separate = normalize_ensemble(graphs, per_graph=True)
        records = _mode_records(
            "compare",
            seed,
            trial,
            n_signals,
            (
                ("joint", joint, truth, joint_ms),
                ("separate", separate, truth_separate, separate_ms),
            ),
        )
    for record in records:
        _print_record(record, verbose)
    return records


def _bound_trial(
    trial: int,
    n_signals: int,
    n_nodes: int,
    k_graphs: int,
    p: float,
    rewires: int,
    n_taps: int,
    seed: int,
    anchor: AnchorMode,
    config: SolverConfig,
    verbose: bool,
) -> list[TrialRecord]:
    with threadpool_limits(limits=1):
        start = perf_counter()
        experiment = Experiment.BOUND
        truth = similar_ensemble(
            n_nodes,
            k_graphs,
            p,
            seed,
            experiment,
            trial,
            rewires=rewires,
            anchor=anchor,
        )
        model = trial_covariances(truth, n_taps, seed, experiment, trial)
        sample = trial_sample_covariances(
            model, n_signals, seed, experiment, trial
        )
        psi = build_Psi(
            truth.alpha, truth.beta_vector(), k_graphs, n_nodes
        )
        reduced = build_reduced(sample, psi, anchor)
        s_star_lower = reduced.restrict(truth.stack())
        epsilon = reduced.commutator_norm(s_star_lower)
        solution = solve_robust(reduced, config, epsilon=epsilon)
        abs_error = absolute_error_l1(solution.shifts, truth)
        try:
            report = theorem2_bound(
                reduced,
                s_star_lower,
                model,
                truth,
                n_total=n_signals * k_graphs,
                epsilon_n=epsilon,
            )
            bound, status = report.bound, "bounded"
            holds = report.bound_holds(abs_error)
        except RankDeficientM:
            bound, holds, status = None, None, "rank-deficient"
        except EmptySupport:
            bound, holds, status = None, None, "empty-support"
        if holds is False:
            warnings.warn(
                f"Trial {trial}: l1 error {abs_error:.6g} exceeds the bound"
                f" {bound:.6g}.",
                BoundWarning,
            )
        error = recovery_error_l1(solution.shifts, truth)
        record = TrialRecord(
            experiment_id="bound",
            seed=seed,
            N=n_nodes,
            K=k_graphs,
            n_signals=n_signals,
            recovered=error < RECOVERY_TOL,
            rel_l1_error=error,
            rel_fro_error_per_graph=_fro_errors(solution, truth),
            epsilon_used=epsilon,
            wall_time_ms=1e3 * (perf_counter() - start),
            trial=trial,
            status=status,
            converged=solution.converged,
            abs_l1_error=abs_error,
            bound=bound,
            bound_holds=holds,
        )
    _print_record(record, verbose)
    return [record]


def _reference_trial(
    trial: int,
    n_signals: int,
    signals: np.ndarray,
    reference: np.ndarray,
    k_graphs: int,
    seed: int,
    alpha: float,
    beta: float,
    anchor: AnchorMode,
    epsilon_strategy: EpsilonStrategy,
    config: SolverConfig,
    verbose: bool,
) -> list[TrialRecord]:
    with threadpool_limits(limits=1):
        start = perf_counter()
        n_nodes = signals.shape[0]
        rng = make_rng(
            seed, Experiment.REFERENCE, trial, Stream.SIGNALS, n_signals
        )
        subsets = signal_subsets(signals, k_graphs, n_signals, rng)
        sample = signal_covariances(subsets)
        distances = signal_distances(subsets)
        alphas = np.full(k_graphs, alpha)
        betas = np.full(k_graphs * (k_graphs - 1) // 2, beta)
        if config.smoothness_eta > 0:
            psi = build_Psi_weighted(
                alphas, betas, distances, config.smoothness_eta
            )
        else:
            psi = build_Psi(alphas, betas, k_graphs, n_nodes)
        reduced = build_reduced(sample, psi, anchor)
        epsilon = choose_epsilon(
            reduced,
            epsilon_strategy,
            covariances=sample,
            n_total=n_signals * k_graphs,
        )
        joint = solve_robust(reduced, config, epsilon=epsilon)
        joint_ms = 1e3 * (perf_counter() - start)

        start = perf_counter()
        separate = combine_solutions(
            solve_separate(
                sample,
                config,
                "robust",
                alpha=alphas,
                epsilons=_separate_epsilons(
                    sample, alphas, epsilon_strategy, n_signals
                ),
                distances=distances,
            )
        )
        separate_ms = 1e3 * (perf_counter() - start)
        truth = GraphEnsemble.from_matrices([reference] * k_graphs)
        records = _mode_records(
            "reference",
            seed,
            trial,
            n_signals,
            (
                ("joint", joint, truth, joint_ms),
                ("separate", separate, truth, separate_ms),
            ),
        )
    for record in records:
        _print_record(record, verbose)
    return records


def _separate_epsilons(
    sample: CovarianceSet,
    alphas: Sequence[float],
    epsilon_strategy: EpsilonStrategy,
    n_signals: int,
) -> list[float]:
    n_nodes = sample.n_nodes
    return [
        choose_epsilon(
            build_reduced([cov], build_Psi([alpha], [], 1, n_nodes), "first"),
            epsilon_strategy,
            covariances=[cov],
            n_total=n_signals,
        )
        for cov, alpha in zip(sample.matrices, alphas, strict=True)
    ]


def _mode_records(
    experiment_id: str,
    seed: int,
    trial: int,
    n_signals: int,
    runs: Sequence[tuple[str, Solution, GraphEnsemble, float]],
) -> list[TrialRecord]:
    """One record per ``(mode, solution, target, wall_ms)`` run."""
    records = []
    for mode, solution, target, wall_ms in runs:
        error = recovery_error_l1(solution.shifts, target)
        records.append(
            TrialRecord(
                experiment_id=experiment_id,
                seed=seed,
                N=target.n_nodes,
                K=target.k_graphs,
                n_signals=n_signals,
                recovered=error < RECOVERY_TOL,
                rel_l1_error=error,
                rel_fro_error_per_graph=_fro_errors(solution, target),
                epsilon_used=solution.epsilon,
                wall_time_ms=wall_ms,
                trial=trial,
                mode=mode,
                converged=solution.converged,
            )
        )
    return records


def _fro_errors(solution: Solution, truth: GraphEnsemble) -> list[float]:
    return [
        recovery_error_fro(est, target)
        for est, target in zip(
            solution.matrices, truth.matrices, strict=True
        )
    ]


def _print_record(record: TrialRecord, verbose: bool) -> None:
    if verbose:
        print(
            f"{record.experiment_id} trial {record.trial}"
            f" ({record.mode}, n={record.n_signals}):"
            f" rel. l1 error {record.rel_l1_error:.6g}"
        )


def experiment_kinds() -> dict[str, Callable[..., list[TrialRecord]]]:
    """Runners by experiment name."""
    return {
        "certificate": run_certificate_experiment,
        "decay": run_decay_experiment,
        "compare": run_joint_vs_separate,
        "bound": run_bound_experiment,
        "reference": run_reference_subsets,
    }


ExperimentKind = Literal[
    "certificate", "decay", "compare", "bound", "reference"
]
