"""Command-line entry point ``jointnet``."""
import argparse
import os
import sys
import warnings
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from jointnet.certificates import theorem1_check, theorem2_bound
from jointnet.cli.config import load_config
from jointnet.exceptions import (
    AnchorWarning,
    ConfigError,
    DataFileError,
    GraphStructureError,
    InfeasibleProblemError,
    IsolatedAnchorNode,
    MaxItersExceeded,
)
from jointnet.experiment import (
    ExperimentResults,
    experiment_kinds,
    recovery_error_l1,
)
from jointnet.graphs import (
    CovarianceSet,
    GraphEnsemble,
    GraphShift,
    SignalEnsemble,
    anchored_erdos_renyi,
    beta_preset,
    erdos_renyi,
    model_covariance,
    precision_covariance,
    random_filter,
    rewire_count,
    rewire_prob,
    sample_ensemble_signals,
    sem_covariance,
    signal_covariances,
    signal_distances,
    validate_gso,
)
from jointnet.operators import (
    build_Phi,
    build_Psi,
    build_Psi_weighted,
    build_reduced,
)
from jointnet.results import (
    load_ensemble,
    load_manifest_covariances,
    load_manifest_signals,
    load_signals,
    read_manifest,
    save_ensemble,
    save_matrix,
    save_report,
    save_solution,
)
from jointnet.rng import Experiment, Stream, make_rng
from jointnet.solvers import (
    SolverConfig,
    choose_epsilon,
    combine_solutions,
    solve_noiseless,
    solve_robust,
    solve_separate,
)

DEFAULT_OUT = "jointnet_out"
DEFAULT_REWIRES = 3
RECOVERY_TOL = 1e-5

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_MAX_ITERS = 2
EXIT_IO = 3
EXIT_CONFIG = 4


def cmd_generate(config: dict) -> int:
    """Draw an ensemble of similar graphs and write it to disk."""
    seed = config.get("seed", 0)
    n_nodes = config.get("n_nodes", 20)
    k_graphs = config.get("k_graphs", 2)
    p = config.get("p", 0.1)
    try:
        graph, seed = anchored_erdos_renyi(
            n_nodes, p, seed, Experiment.GENERATE, Stream.GRAPH
        )
    except IsolatedAnchorNode:
        warnings.warn(
            f"Node 1 is isolated for every seed tried (p={p}).",
            AnchorWarning,
        )
        graph = erdos_renyi(
            n_nodes, p, make_rng(seed, Experiment.GENERATE, Stream.GRAPH)
        )
    if config.get("weighted", False):
        low, high = config.get("weight_range", [0.5, 1.5])
        draws = make_rng(seed, Experiment.GENERATE, Stream.WEIGHTS).uniform(
            low, high, size=(n_nodes, n_nodes)
        )
        draws = np.triu(draws, k=1)
        graph = validate_gso(graph.weights * (draws + draws.T))

    graphs = [graph]
    for k in range(1, k_graphs):
        rng = make_rng(seed, Experiment.GENERATE, Stream.REWIRE, k)
        if "q" in config:
            graphs.append(rewire_prob(graph, config["q"], rng))
        else:
            rewires = config.get("rewires", _default_rewires(graph))
            graphs.append(rewire_count(graph, rewires, rng))
    ensemble = GraphEnsemble(
        graphs=tuple(graphs),
        alpha=np.asarray(config.get("alpha", np.ones(k_graphs))),
        beta=_beta_mapping(config.get("beta", "complete"), k_graphs),
    )

    kind = config.get("covariance", "model")
    covariances = []
    for k, shift in enumerate(ensemble.graphs):
        if kind == "sem":
            covariances.append(sem_covariance(shift))
        elif kind == "precision":
            covariances.append(precision_covariance(shift))
        else:
            rng = make_rng(seed, Experiment.GENERATE, Stream.FILTER, k)
            filt = random_filter(config.get("L", 3), rng)
            covariances.append(model_covariance(shift, filt))
    n_signals = config.get("n_signals", 0)
    signals = None
    if n_signals > 0:
        seeds = [
            make_rng(seed, Experiment.GENERATE, Stream.SIGNALS, k)
            for k in range(k_graphs)
        ]
        signals = sample_ensemble_signals(
            covariances, n_signals, seeds
        ).signals

    out_dir = Path(config.get("out", DEFAULT_OUT))
    covariance_files = []
    for k, cov in enumerate(covariances, start=1):
        name = f"covariance_{k}.csv"
        save_matrix(cov, out_dir / name)
        covariance_files.append(name)
    manifest = save_ensemble(
        ensemble,
        out_dir,
        signals=signals,
        graph_format=config.get("graph_format", "dense"),
        extra={
            "seed": seed,
            "covariance_kind": kind,
            "covariance_files": covariance_files,
        },
    )
    print(f"Seed: {seed}")
    print(f"Manifest: {manifest}")
    return EXIT_OK


def cmd_solve(config: dict) -> int:
    """Infer the graphs of a manifest with the chosen program."""
    mode = config.get("mode", "robust")
    anchor = "each" if mode == "separate" else config.get("anchor", "each")
    manifest = read_manifest(config["manifest"])
    source = config.get(
        "covariance_source",
        "model" if "covariance_files" in manifest else "sample",
    )
    covariances, signals = _covariances(config["manifest"], source)
    solver_config = SolverConfig(**config.get("solver", {}))
    alpha, beta = _weights(config, manifest)
    n_nodes = manifest["n_nodes"]
    n_total = None if signals is None else signals.n_total
    distances = _distances(signals, solver_config)

    if mode == "separate":
        if "epsilon" in config:
            epsilons = [config["epsilon"]] * manifest["k_graphs"]
        else:
            epsilons = [
                choose_epsilon(
                    build_reduced(
                        [cov],
                        _psi(
                            [a],
                            [],
                            n_nodes,
                            None if distances is None else [distances[k]],
                            solver_config.smoothness_eta,
                        ),
                    ),
                    config.get("epsilon_strategy", "min-feasible"),
                    covariances=[cov],
                    n_total=(
                        None if signals is None else signals.n_samples[k]
                    ),
                    slack=config.get("slack", 1.5),
                )
                for k, (cov, a) in enumerate(
                    zip(covariances, alpha, strict=True)
                )
            ]
        solution = combine_solutions(
            solve_separate(
                covariances,
                solver_config,
                "robust",
                alpha=alpha,
                epsilons=epsilons,
                distances=distances,
            )
        )
    else:
        psi = _psi(
            alpha, beta, n_nodes, distances, solver_config.smoothness_eta
        )
        if mode == "noiseless":
            solution = solve_noiseless(
                build_Phi(covariances, psi, anchor), solver_config
            )
        else:
            reduced = build_reduced(covariances, psi, anchor)
            epsilon = config.get("epsilon")
            if epsilon is None:
                epsilon = choose_epsilon(
                    reduced,
                    config.get("epsilon_strategy", "min-feasible"),
                    covariances=covariances,
                    n_total=n_total,
                    slack=config.get("slack", 1.5),
                )
            solution = solve_robust(reduced, solver_config, epsilon)

    extra: dict = {
        "mode": mode,
        "anchor": anchor,
        "covariance_source": source,
    }
    print(f"Objective: {solution.objective:.17g}")
    if solution.epsilon is not None:
        print(f"Epsilon: {solution.epsilon:.17g}")
    if "graph_files" in manifest:
        truth = load_ensemble(config["manifest"], normalize=anchor)
        error = recovery_error_l1(solution.shifts, truth)
        extra["rel_l1_error"] = error
        extra["recovered"] = error < RECOVERY_TOL
        print(f"Relative l1 error: {error:.17g}")
    path = save_solution(solution, config.get("out", DEFAULT_OUT), extra)
    print(f"Solution: {path}")
    return EXIT_OK


def cmd_certify(config: dict) -> int:
    """Evaluate the recovery certificate or the robust error bound."""
    kind = config.get("kind", "theorem1")
    anchor = config.get("anchor", "each")
    manifest = read_manifest(config["manifest"])
    truth = load_ensemble(config["manifest"], normalize=anchor)
    alpha, beta = _weights(config, manifest)
    psi = build_Psi(alpha, beta, manifest["k_graphs"], manifest["n_nodes"])
    out_dir = Path(config.get("out", DEFAULT_OUT))

    if kind == "theorem1":
        covariances, _ = _covariances(config["manifest"], "model")
        problem = build_Phi(covariances, psi, anchor)
        if "delta_grid" in config:
            report = theorem1_check(
                problem, truth.stack(), tuple(config["delta_grid"])
            )
        else:
            report = theorem1_check(problem, truth.stack())
        path = save_report(report, out_dir / "certificate.json")
        print(f"Status: {report.status}")
        if report.gamma_noiseless is not None:
            print(f"Gamma: {report.gamma_noiseless:.17g}")
        print(f"Report: {path}")
        return EXIT_OK if report.status == "certified" else EXIT_INFEASIBLE

    model, _ = _covariances(config["manifest"], "model")
    sample, signals = _covariances(config["manifest"], "sample")
    reduced = build_reduced(sample, psi, anchor)
    s_star_lower = reduced.restrict(truth.stack())
    epsilon = config.get("epsilon", reduced.commutator_norm(s_star_lower))
    bound = theorem2_bound(
        reduced,
        s_star_lower,
        CovarianceSet(tuple(model), kind="model"),
        truth,
        n_total=signals.n_total,
        epsilon_n=epsilon,
    )
    path = save_report(bound, out_dir / "bound.json")
    print(f"Gamma: {bound.gamma_robust:.17g}")
    print(f"Bound: {bound.bound:.17g}")
    print(f"Report: {path}")
    return EXIT_OK


def cmd_experiment(config: dict) -> int:
    """Run a seeded experiment and write its records and summaries."""
    kind = config.get("kind", "certificate")
    kwargs = {
        key: value
        for key, value in config.items()
        if key not in ("kind", "seed", "out", "solver", "manifest", "fit_last")
        and key != "n_jobs"
    }
    kwargs["seed0"] = config.get("seed", 0)
    kwargs["config"] = SolverConfig(**config.get("solver", {}))
    kwargs["n_jobs"] = worker_count(config.get("n_jobs"))
    if kind == "compare":
        kwargs["graphs"] = load_ensemble(config["manifest"])
    if kind == "reference" and "signals" in config:
        kwargs["signals"] = load_signals(config["signals"])
    records = experiment_kinds()[kind](**kwargs)

    results = ExperimentResults(kind, records)
    out_dir = config.get("out", DEFAULT_OUT)
    results.save(
        out_dir,
        histogram=kind == "certificate",
        timings=True,
        verbose=config.get("verbose", False),
    )
    if kind == "decay":
        results.save_fit_json(fit_last=config.get("fit_last", 2))
    print(f"Seed: {kwargs['seed0']}")
    print(f"Records: {len(records)}")
    print(f"Results: {results.path}")
    return EXIT_OK


def worker_count(n_jobs: int | None) -> int:
    """Number of workers, capped by ``JOINTNET_THREADS`` when set."""
    threads = os.environ.get("JOINTNET_THREADS")
    if threads is None:
        return 1 if n_jobs is None else n_jobs
    try:
        cap = int(threads)
    except ValueError as error:
        raise ConfigError(
            threads, "JOINTNET_THREADS must be a positive integer."
        ) from error
    if cap < 1:
        raise ConfigError(
            threads, "JOINTNET_THREADS must be a positive integer."
        )
    if n_jobs is None or n_jobs < 1:
        return cap
    return min(n_jobs, cap)


COMMANDS: dict[str, Callable[[dict], int]] = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "certify": cmd_certify,
    "experiment": cmd_experiment,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="jointnet",
        description="Joint inference of multiple graphs from stationary"
        " signals.",
    )
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument(
        "--config", type=Path, default=None, help="JSON configuration."
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="Overrides `seed`."
    )
    parser.add_argument(
        "--out", type=str, default=None, help="Overrides `out`."
    )
    args = parser.parse_args(argv)
    try:
        config = load_config(
            args.command, args.config, {"seed": args.seed, "out": args.out}
        )
        return COMMANDS[args.command](config)
    except (ConfigError, ValueError) as error:
        return _fail(error, EXIT_CONFIG)
    except MaxItersExceeded as error:
        return _fail(error, EXIT_MAX_ITERS)
    except InfeasibleProblemError as error:
        return _fail(error, EXIT_INFEASIBLE)
    except (DataFileError, GraphStructureError, OSError) as error:
        return _fail(error, EXIT_IO)


def _fail(error: Exception, code: int) -> int:
    print(f"jointnet: error: {error}", file=sys.stderr)
    return code


def _covariances(
    manifest_path: str, source: str
) -> tuple[list[np.ndarray], SignalEnsemble | None]:
    if source == "model":
        return load_manifest_covariances(manifest_path), None
    signals = SignalEnsemble(tuple(load_manifest_signals(manifest_path)))
    return list(signal_covariances(signals).matrices), signals


def _weights(
    config: dict, manifest: dict
) -> tuple[np.ndarray, dict[tuple[int, int], float]]:
    k_graphs = manifest["k_graphs"]
    alpha = np.asarray(
        config.get("alpha", manifest.get("alpha", np.ones(k_graphs))),
        dtype=float,
    )
    if alpha.shape != (k_graphs,):
        raise ConfigError(
            alpha.tolist(), f"`alpha` must hold {k_graphs} values."
        )
    beta = config.get("beta", manifest.get("beta", "complete"))
    return alpha, _beta_mapping(beta, k_graphs)


def _default_rewires(graph: GraphShift) -> int:
    """``DEFAULT_REWIRES``, capped by the edges and non-edges available."""
    n_pairs = graph.n_nodes * (graph.n_nodes - 1) // 2
    return min(DEFAULT_REWIRES, graph.n_edges, n_pairs - graph.n_edges)


def _beta_mapping(
    beta: str | list[dict], k_graphs: int
) -> dict[tuple[int, int], float]:
    if isinstance(beta, str):
        return beta_preset(k_graphs, beta)
    return {(entry["k"] - 1, entry["kp"] - 1): entry["w"] for entry in beta}


def _distances(
    signals: SignalEnsemble | None, solver_config: SolverConfig
) -> list[np.ndarray] | None:
    if solver_config.smoothness_eta == 0:
        return None
    if signals is None:
        raise DataFileError(
            solver_config.smoothness_eta,
            "Smoothness weighting needs signal files.",
        )
    return signal_distances(signals)


def _psi(
    alpha: Sequence[float] | np.ndarray,
    beta: dict[tuple[int, int], float] | list,
    n_nodes: int,
    distances: list[np.ndarray] | None,
    eta: float,
) -> np.ndarray:
    if distances is not None and eta > 0:
        return build_Psi_weighted(alpha, beta, distances, eta)
    return build_Psi(alpha, beta, len(alpha), n_nodes)


if __name__ == "__main__":
    sys.exit(main())
