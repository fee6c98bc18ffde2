"""Splitting solver for the noiseless joint inference program."""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from jointnet.exceptions import Infeasible
from jointnet.graphs import GraphEnsemble
from jointnet.operators import (
    VectorizedProblem,
    psi_weights,
    unvec_stack,
    vec,
)
from jointnet.solvers.solver_base import (
    ADMMSolver,
    Feasibility,
    Solution,
    SolverConfig,
    pattern_multiplier,
    relative_residuals,
    soft_threshold,
    symmetrize_hollow,
)

RANK_TOL = 1e-9
INFEASIBILITY_TOL = 1e-6
ROW_TOL = 1e-12


@dataclass
class NoiselessSolver(ADMMSolver):
    """ADMM for ``min ||Psi s||_1`` subject to ``Phi s = b``.

    The affine constraint is eliminated once: every feasible point is
    ``s = s0 + V z`` with ``s0`` the minimum-norm solution and ``V`` an
    orthonormal basis of the null space of ``Phi``. The splitting then
    runs on ``t = Psi V z + Psi s0`` with the z-update solved through a
    cached Cholesky factor of ``V^T Psi^T Psi V``. Iterates are
    over-relaxed by ``config.relaxation``.

    Every ``check_every`` iterations the zero pattern of ``t`` is frozen
    and the corresponding least-squares system solved exactly. The run
    stops when the relative duality gap between the polished point and a
    dual bound is below ``tol_primal``, or when both ADMM residuals are
    below tolerance. The bound is recovered from the scaled multipliers or
    from the sign pattern of the polished point, whichever is larger.
    """

    default_tol = 1e-10

    def solve(self, problem: VectorizedProblem) -> Solution:
        self.rho = self.config.rho
        s0, null = feasible_parametrization(problem.Phi, problem.b)
        if null.shape[1] == 0:
            return self._finish(_solution(problem, s0, 0, 0.0, 0.0, True))

        a_full = problem.Psi @ null
        c_full = problem.Psi @ s0
        row_norm = np.abs(a_full).max(axis=1)
        active = row_norm > ROW_TOL * row_norm.max()
        a_mat = np.ascontiguousarray(a_full[active])
        c_vec = np.ascontiguousarray(c_full[active])
        offset = float(np.abs(c_full[~active]).sum())
        factor = scipy.linalg.cho_factor(a_mat.T @ a_mat)
        relax = self.config.relaxation

        def objective(z: np.ndarray) -> float:
            return float(np.abs(a_mat @ z + c_vec).sum()) + offset

        z = np.zeros(null.shape[1])
        t = c_vec.copy()
        u = np.zeros_like(t)
        best_z, best_obj = z, objective(z)
        primal = dual = np.inf
        converged = False
        self.iterations = 0
        for it in range(1, self.config.max_iters + 1):
            self.iterations = it
            z = scipy.linalg.cho_solve(factor, a_mat.T @ (t - u - c_vec))
            fitted = a_mat @ z + c_vec
            hat = relax * fitted + (1.0 - relax) * t
            t_old = t
            t = soft_threshold(hat + u, 1.0 / self.rho)
            resid = fitted - t
            u = u + hat - t
            primal, dual = relative_residuals(
                float(np.linalg.norm(resid)),
                max(np.linalg.norm(fitted), np.linalg.norm(t)),
                self.rho * float(np.linalg.norm(a_mat.T @ (t - t_old))),
                self.rho * float(np.linalg.norm(a_mat.T @ u)),
            )
            self._print_progress(objective(z), primal, dual)
            if self._converged(primal, dual):
                converged = True
                break
            if it % self.config.check_every:
                continue
            z_pol = _polish(a_mat, c_vec, z, t)
            obj_pol = objective(z_pol)
            if obj_pol < best_obj:
                best_z, best_obj = z_pol, obj_pol
            lower = offset + max(
                _dual_bound(a_mat, c_vec, factor, lam)
                for lam in (
                    self.rho * u,
                    pattern_multiplier(a_mat, a_mat @ best_z + c_vec),
                )
            )
            if best_obj - lower <= self.tol_primal * max(1.0, best_obj):
                converged = True
                break
            u = u * self._update_rho(primal, dual)

        for cand in (z, _polish(a_mat, c_vec, z, t)):
            obj = objective(cand)
            if obj < best_obj:
                best_z, best_obj = cand, obj
        return self._finish(
            _solution(
                problem,
                s0 + null @ best_z,
                self.iterations,
                primal,
                dual,
                converged,
            )
        )


def solve_noiseless(
    problem: VectorizedProblem, config: SolverConfig | None = None
) -> Solution:
    """Solve the noiseless program with :class:`NoiselessSolver`."""
    return NoiselessSolver(config or SolverConfig()).solve(problem)


def feasible_parametrization(
    phi: np.ndarray, b: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Minimum-norm solution of ``Phi s = b`` and a null-space basis.

    Raises
    ------
    Infeasible
        If the least-squares residual exceeds ``1e-6``.
    """
    s0 = scipy.linalg.lstsq(phi, b, cond=RANK_TOL)[0]
    residual = float(np.linalg.norm(phi @ s0 - b))
    if residual > INFEASIBILITY_TOL:
        raise Infeasible(residual)
    return s0, scipy.linalg.null_space(phi, rcond=RANK_TOL)


def _polish(
    a_mat: np.ndarray, c_vec: np.ndarray, z: np.ndarray, t: np.ndarray
) -> np.ndarray:
    """Move ``z`` onto the zero pattern of ``t`` with a minimal step."""
    zeros = np.flatnonzero(t == 0.0)
    if zeros.size == 0:
        return z
    a_zero = a_mat[zeros]
    step = scipy.linalg.lstsq(
        a_zero, -(a_zero @ z + c_vec[zeros]), cond=ROW_TOL
    )[0]
    return z + step


def _dual_bound(
    a_mat: np.ndarray,
    c_vec: np.ndarray,
    factor: tuple,
    multiplier: np.ndarray,
) -> float:
    """Lower bound ``y^T c`` from a multiplier made dual feasible.

    Dual feasibility is ``A^T y = 0`` and ``||y||_inf <= 1``.
    """
    y = multiplier - a_mat @ scipy.linalg.cho_solve(
        factor, a_mat.T @ multiplier
    )
    y = y / max(1.0, float(np.abs(y).max(initial=0.0)))
    return float(y @ c_vec)


def _solution(
    problem: VectorizedProblem,
    s: np.ndarray,
    iterations: int,
    primal: float,
    dual: float,
    converged: bool,
) -> Solution:
    matrices = symmetrize_hollow(unvec_stack(s, problem.n_nodes))
    s_proj = np.concatenate([vec(matrix) for matrix in matrices])
    phi, rows = problem.Phi, problem.anchor_rows
    anchor = phi[rows] @ s_proj - problem.b[rows]
    feasibility = Feasibility(
        commutator_residual=float(
            np.linalg.norm(phi[problem.commutator_rows] @ s_proj)
        ),
        symmetry_residual=max(
            float(np.abs(m - m.T).max(initial=0.0)) for m in matrices
        ),
        diag_residual=max(
            float(np.abs(np.diag(m)).max(initial=0.0)) for m in matrices
        ),
        scale_residual=float(np.abs(anchor).max(initial=0.0)),
    )
    alpha, beta = psi_weights(problem.Psi, problem.k_graphs, problem.n_nodes)
    return Solution(
        shifts=GraphEnsemble.from_matrices(matrices, alpha, beta),
        objective=problem.objective(s_proj),
        iterations=iterations,
        primal_residual=float(primal),
        dual_residual=float(dual),
        feasibility=feasibility,
        converged=converged,
    )
