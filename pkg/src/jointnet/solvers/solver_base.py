"""Define the solver configuration, results and the ADMM base class."""
import warnings
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field, replace

import numpy as np
import scipy.linalg
from numba import njit

from jointnet.exceptions import ConvergenceWarning, MaxItersExceeded
from jointnet.graphs import GraphEnsemble

RHO_RATIO = 10.0
RHO_FACTOR = 2.0
PATTERN_TOL = 1e-9
MULTIPLIER_TOL = 1e-12


@njit
def soft_threshold(values: np.ndarray, threshold: float) -> np.ndarray:
    """Proximal operator of ``threshold * ||.||_1``.

    Arguments
    ---------
    values : np.ndarray
        Point at which the operator is evaluated.
    threshold : float
        Nonnegative shrinkage.

    Returns
    -------
    np.ndarray
        Entrywise ``sign(v) * max(|v| - threshold, 0)``.
    """
    out = np.empty_like(values)
    for i in range(values.size):
        val = values[i]
        if val > threshold:
            out[i] = val - threshold
        elif val < -threshold:
            out[i] = val + threshold
        else:
            out[i] = 0.0
    return out


@njit
def project_ball(values: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto the ball ``{x : ||x||_2 <= radius}``."""
    norm = np.sqrt(np.sum(values * values))
    if norm <= radius:
        return values.copy()
    if norm == 0.0:
        return np.zeros_like(values)
    return values * (radius / norm)


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of the splitting solvers.

    ``tol_primal`` and ``tol_dual`` default to the solver-specific values
    (``1e-10`` noiseless, ``1e-8`` robust) when left as None.
    ``smoothness_eta`` weights the smoothness-penalized analysis operator
    and is consumed wherever that operator is built. ``relaxation`` is
    the over-relaxation factor of the split iterates; 1 gives plain ADMM.
    """

    rho: float = 1.0
    max_iters: int = 50_000
    tol_primal: float | None = None
    tol_dual: float | None = None
    epsilon_n: float = 0.0
    smoothness_eta: float = 0.0
    adapt_rho: bool = True
    check_every: int = 50
    relaxation: float = 1.6
    strict: bool = False
    verbose: bool = False
    log_every: int = 1000

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise ValueError(f"`rho` must be positive. Got: {self.rho}.")
        if self.max_iters < 1:
            raise ValueError(
                f"`max_iters` must be at least 1. Got: {self.max_iters}."
            )
        for name in ("tol_primal", "tol_dual"):
            tol = getattr(self, name)
            if tol is not None and tol <= 0:
                raise ValueError(f"`{name}` must be positive. Got: {tol}.")
        if self.epsilon_n < 0:
            raise ValueError(
                f"`epsilon_n` must be nonnegative. Got: {self.epsilon_n}."
            )
        if self.smoothness_eta < 0:
            raise ValueError(
                "`smoothness_eta` must be nonnegative. Got:"
                f" {self.smoothness_eta}."
            )
        if not 0 < self.relaxation < 2:
            raise ValueError(
                f"`relaxation` must lie in (0, 2). Got: {self.relaxation}."
            )
        if self.check_every < 1 or self.log_every < 1:
            raise ValueError(
                "`check_every` and `log_every` must be positive. Got:"
                f" {self.check_every}, {self.log_every}."
            )


@dataclass(frozen=True)
class Feasibility:
    """Constraint residuals of a returned estimate.

    ``commutator_residual`` is ``sqrt(sum_k ||S_k C_k - C_k S_k||_F^2)``.
    """

    commutator_residual: float
    symmetry_residual: float
    diag_residual: float
    scale_residual: float


@dataclass(frozen=True, eq=False)
class Solution:
    """Estimate returned by a solver together with its diagnostics."""

    shifts: GraphEnsemble
    objective: float
    iterations: int
    primal_residual: float
    dual_residual: float
    feasibility: Feasibility
    converged: bool = True
    epsilon: float | None = None

    @property
    def matrices(self) -> list[np.ndarray]:
        return self.shifts.matrices

    def stack(self) -> np.ndarray:
        return self.shifts.stack()

    def with_epsilon(self, epsilon: float) -> "Solution":
        return replace(self, epsilon=float(epsilon))

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "iterations": self.iterations,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "converged": self.converged,
            "epsilon": self.epsilon,
            "feasibility": asdict(self.feasibility),
        }


@dataclass
class ADMMSolver(ABC):
    """Basic representation of a scaled-form ADMM solver.

    Subclasses implement :meth:`solve`; this class keeps the penalty
    parameter, residual balancing, progress printing and the handling of
    runs stopped at ``max_iters``.
    """

    config: SolverConfig = field(default_factory=SolverConfig)
    rho: float = field(init=False)
    iterations: int = field(init=False, default=0)

    default_tol = 1e-8

    def __post_init__(self) -> None:
        self.rho = self.config.rho

    @abstractmethod
    def solve(self, problem) -> Solution:
        """Solve ``problem`` and return the projected estimate."""

    @property
    def tol_primal(self) -> float:
        if self.config.tol_primal is None:
            return self.default_tol
        return self.config.tol_primal

    @property
    def tol_dual(self) -> float:
        if self.config.tol_dual is None:
            return self.default_tol
        return self.config.tol_dual

    def _converged(self, primal: float, dual: float) -> bool:
        return primal < self.tol_primal and dual < self.tol_dual

    def _update_rho(self, primal: float, dual: float) -> float:
        """Balance residuals and return the factor ``rho_old / rho_new``.

        The scaled dual variables must be multiplied by the returned factor.
        """
        if not self.config.adapt_rho:
            return 1.0
        if primal > RHO_RATIO * dual:
            self.rho *= RHO_FACTOR
            return 1.0 / RHO_FACTOR
        if dual > RHO_RATIO * primal:
            self.rho /= RHO_FACTOR
            return RHO_FACTOR
        return 1.0

    def _print_progress(
        self, objective: float, primal: float, dual: float
    ) -> None:
        if not self.config.verbose:
            return
        if self.iterations % self.config.log_every == 0:
            print(
                f"{type(self).__name__} iteration {self.iterations}:"
                f" objective {objective:.10g}, primal {primal:.3e},"
                f" dual {dual:.3e}, rho {self.rho:.3g}"
            )

    def _finish(self, solution: Solution) -> Solution:
        """Raise or warn when the run stopped at ``max_iters``."""
        if self.config.verbose:
            print(
                f"{type(self).__name__} finished after {self.iterations}"
                f" iterations, objective {solution.objective:.17g},"
                f" converged: {solution.converged}."
            )
        if solution.converged:
            return solution
        if self.config.strict:
            raise MaxItersExceeded(self.iterations, solution)
        warnings.warn(
            f"{type(self).__name__} stopped at max_iters="
            f"{self.config.max_iters} with primal residual"
            f" {solution.primal_residual:.3e} and dual residual"
            f" {solution.dual_residual:.3e}.",
            ConvergenceWarning,
        )
        return solution


def symmetrize_hollow(matrices: list[np.ndarray]) -> list[np.ndarray]:
    """Average each matrix with its transpose and zero the diagonal."""
    out = []
    for matrix in matrices:
        sym = 0.5 * (matrix + matrix.T)
        np.fill_diagonal(sym, 0.0)
        out.append(sym)
    return out


def relative_residuals(
    primal: float, primal_scale: float, dual: float, dual_scale: float
) -> tuple[float, float]:
    """Normalize ADMM residuals by the size of the iterates."""
    return primal / max(1.0, primal_scale), dual / max(1.0, dual_scale)


def pattern_multiplier(
    a_mat: np.ndarray,
    fitted: np.ndarray,
    extra: np.ndarray | None = None,
) -> np.ndarray:
    """Subgradient of ``||.||_1`` at ``fitted`` nearest to stationarity.

    Nonzero entries of ``fitted`` fix their multiplier to the sign; the
    remaining entries are chosen in ``[-1, 1]`` to cancel ``A^T y`` in the
    least-squares sense, with ``extra`` as an additional free direction
    (the gradient of an active constraint).
    """
    scale = max(1.0, float(np.abs(fitted).max(initial=0.0)))
    nonzero = np.abs(fitted) > PATTERN_TOL * scale
    multiplier = np.where(nonzero, np.sign(fitted), 0.0)
    zeros = ~nonzero
    if not zeros.any():
        return multiplier
    columns = a_mat[zeros].T
    if extra is not None:
        columns = np.column_stack((columns, extra))
    rhs = -(a_mat[nonzero].T @ multiplier[nonzero])
    coef = scipy.linalg.lstsq(columns, rhs, cond=MULTIPLIER_TOL)[0]
    multiplier[zeros] = np.clip(coef[: zeros.sum()], -1.0, 1.0)
    return multiplier
