"""Create solvers, run separate inference and pick the robust radius."""
from math import hypot, log, sqrt
from typing import Literal, Sequence

import numpy as np

from jointnet.graphs import CovarianceSet, GraphEnsemble
from jointnet.operators import (
    ReducedProblem,
    build_Phi,
    build_Psi,
    build_Psi_weighted,
    build_reduced,
    unvec_stack,
)
from jointnet.operators.vectorize import _as_matrices
from jointnet.solvers.noiseless import NoiselessSolver
from jointnet.solvers.robust import RobustSolver, minimal_epsilon_point
from jointnet.solvers.solver_base import (
    ADMMSolver,
    Feasibility,
    Solution,
    SolverConfig,
)

EpsilonStrategy = Literal["min-feasible", "theorem5", "scaled-min"]


def get_solver(
    mode: str = "noiseless", config: SolverConfig | None = None
) -> ADMMSolver:
    """Create and return a solver of the desired type.

    Parameters
    ----------
    mode : str
        Allowed values for `mode`: ["noiseless", "robust"].
    config : SolverConfig | None
        Solver parameters. Default: ``SolverConfig()``.

    Returns
    -------
    ADMMSolver
        Instance of the solver for the given `mode`.
    """
    solvers = {
        "noiseless": NoiselessSolver,
        "robust": RobustSolver,
    }
    mode = mode.lower()
    if mode not in solvers:
        raise SolverNotFoundError(mode, solvers.keys())
    return solvers[mode](config=config or SolverConfig())


def solve_separate(
    covariances: CovarianceSet | Sequence[np.ndarray],
    config: SolverConfig | None = None,
    mode: Literal["noiseless", "robust"] = "robust",
    alpha: Sequence[float] | None = None,
    epsilons: Sequence[float] | None = None,
    distances: Sequence[np.ndarray] | None = None,
) -> list[Solution]:
    """Infer every graph on its own, anchored to its own first column.

    Each graph is a single-graph instance of the joint program with no
    similarity terms.

    Parameters
    ----------
    covariances : CovarianceSet | sequence of numpy.ndarray
        Covariance of every graph.
    config : SolverConfig | None
        Solver parameters. Default: ``SolverConfig()``.
    mode : {'noiseless', 'robust'}
        Program solved for every graph. Default: 'robust'.
    alpha : sequence of float | None
        Sparsity weight of every graph. Default: ones.
    epsilons : sequence of float | None
        Robust radius of every graph. Default: ``config.epsilon_n`` each.
    distances : sequence of numpy.ndarray | None
        Node distance matrices; with ``config.smoothness_eta > 0`` they
        weight the sparsity term. Default: None.

    Returns
    -------
    list of Solution
    """
    config = config or SolverConfig()
    matrices = _as_matrices(covariances)
    k_graphs = len(matrices)
    alpha = np.ones(k_graphs) if alpha is None else np.asarray(alpha)
    if epsilons is None:
        epsilons = [config.epsilon_n] * k_graphs
    if len(alpha) != k_graphs or len(epsilons) != k_graphs:
        raise ValueError(
            f"`alpha` and `epsilons` must hold {k_graphs} values. Got:"
            f" {len(alpha)} and {len(epsilons)}."
        )
    solver = get_solver(mode, config)
    solutions = []
    for k, cov in enumerate(matrices):
        n_nodes = cov.shape[0]
        if distances is not None and config.smoothness_eta > 0:
            psi = build_Psi_weighted(
                [alpha[k]], [], [distances[k]], config.smoothness_eta
            )
        else:
            psi = build_Psi([alpha[k]], [], 1, n_nodes)
        if mode == "noiseless":
            solutions.append(solver.solve(build_Phi([cov], psi)))
        else:
            solutions.append(
                solver.solve(build_reduced([cov], psi), epsilons[k])
            )
    return solutions


def combine_solutions(solutions: Sequence[Solution]) -> Solution:
    """Bundle single-graph solutions into one K-graph solution.

    Objectives add up, residuals and iteration counts take the worst case
    and the radius is the Euclidean norm of the per-graph radii. The
    sparsity weights are kept and no similarity weights are attached.
    """
    if not solutions:
        raise ValueError("No solutions to combine. Got: 0.")
    feas = [sol.feasibility for sol in solutions]
    epsilons = [sol.epsilon for sol in solutions]
    return Solution(
        shifts=GraphEnsemble.from_matrices(
            [matrix for sol in solutions for matrix in sol.matrices],
            np.concatenate([sol.shifts.alpha for sol in solutions]),
            {},
        ),
        objective=sum(sol.objective for sol in solutions),
        iterations=max(sol.iterations for sol in solutions),
        primal_residual=max(sol.primal_residual for sol in solutions),
        dual_residual=max(sol.dual_residual for sol in solutions),
        feasibility=Feasibility(
            commutator_residual=hypot(
                *(item.commutator_residual for item in feas)
            ),
            symmetry_residual=max(item.symmetry_residual for item in feas),
            diag_residual=max(item.diag_residual for item in feas),
            scale_residual=max(item.scale_residual for item in feas),
        ),
        converged=all(sol.converged for sol in solutions),
        epsilon=None if None in epsilons else hypot(*epsilons),
    )


def choose_epsilon(
    reduced: ReducedProblem,
    strategy: EpsilonStrategy = "min-feasible",
    covariances: CovarianceSet | Sequence[np.ndarray] | None = None,
    n_total: int | None = None,
    slack: float = 1.5,
    rel_tol: float = 1e-3,
) -> float:
    """Pick the radius of the robust program.

    Parameters
    ----------
    reduced : ReducedProblem
        Reduced operators built from sample covariances.
    strategy : {'min-feasible', 'theorem5', 'scaled-min'}
        'min-feasible' returns the smallest feasible radius, computed in
        closed form, widened by the relative margin `rel_tol`.
        'theorem5' returns ``N w sqrt(K log N / n_total)`` where ``w`` is
        estimated from the sample covariances and the minimal-epsilon
        point. 'scaled-min' returns ``slack`` times the minimal radius.
    covariances : CovarianceSet | sequence of numpy.ndarray | None
        Sample covariances, needed for 'theorem5'.
    n_total : int | None
        Total number of signals, needed for 'theorem5'.
    slack : float
        Factor applied by 'scaled-min'. Default: 1.5.
    rel_tol : float
        Relative margin of 'min-feasible' above the smallest radius.
        Default: 1e-3.

    Returns
    -------
    float
    """
    x_ls, eps_min = minimal_epsilon_point(reduced)
    if strategy == "min-feasible":
        if rel_tol < 0:
            raise ValueError(
                f"`rel_tol` must be nonnegative. Got: {rel_tol}."
            )
        return eps_min * (1.0 + rel_tol)
    if strategy == "scaled-min":
        if slack < 1.0:
            raise ValueError(f"`slack` must be at least 1. Got: {slack}.")
        return slack * eps_min
    if strategy == "theorem5":
        if covariances is None or n_total is None:
            raise ValueError(
                "Strategy `theorem5` needs `covariances` and `n_total`. Got:"
                f" {type(covariances).__name__}, {n_total}."
            )
        omega = _estimate_omega(reduced, x_ls, _as_matrices(covariances))
        n_nodes, k_graphs = reduced.n_nodes, reduced.k_graphs
        return n_nodes * omega * sqrt(k_graphs * log(n_nodes) / n_total)
    raise ValueError(
        "`strategy` must be one of `min-feasible`, `theorem5` or"
        f" `scaled-min`. Got: {strategy}."
    )


def _estimate_omega(
    reduced: ReducedProblem, x_ls: np.ndarray, covariances: list
) -> float:
    shifts = unvec_stack(reduced.expand(x_ls), reduced.n_nodes)
    omega = 0.0
    for cov, shift in zip(covariances, shifts, strict=True):
        omega = max(
            omega,
            float(np.max(np.diag(cov))),
            float(np.max(np.diag(shift @ cov @ shift))),
        )
    return omega


class SolverNotFoundError(Exception):
    """Exception raised when invalid solver is passed.

    Attributes:
        input_value -- input value which caused the error
        allowed -- allowed input values
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        allowed,
        message="Input solver is not an allowed value.",
    ) -> None:
        self.input_value = input_value
        self.allowed = allowed
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return (
            f"{self.message} Allowed values: {self.allowed}."
            f" Got: {self.input_value}."
        )
