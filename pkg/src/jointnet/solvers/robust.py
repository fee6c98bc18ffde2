"""Splitting solver for the robust joint inference program."""
from dataclasses import dataclass
from math import sqrt

import numpy as np
import scipy.linalg

from jointnet.exceptions import InfeasibleEpsilon
from jointnet.graphs import GraphEnsemble
from jointnet.operators import ReducedProblem, unvec_stack
from jointnet.solvers.solver_base import (
    ADMMSolver,
    Feasibility,
    Solution,
    SolverConfig,
    pattern_multiplier,
    project_ball,
    relative_residuals,
    soft_threshold,
    symmetrize_hollow,
)

RANK_TOL = 1e-9
ROW_TOL = 1e-12
EPSILON_ABS_TOL = 1e-13
BALL_TOL = 1e-12
CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AnchoredGeometry:
    """Coordinates of the anchored affine set adapted to ``M``.

    Every anchored point is ``x_ls + basis @ y``. The first ``rank``
    coordinates of ``y`` whiten ``M``:
    ``||M (x_ls + basis @ y)||^2 == eps_min^2 + ||y[:rank]||^2``. The
    remaining coordinates span directions ``M`` does not see.
    """

    x_ls: np.ndarray
    eps_min: float
    basis: np.ndarray
    rank: int


def anchored_geometry(reduced: ReducedProblem) -> AnchoredGeometry:
    """Eliminate the anchor and whiten ``M`` on what is left."""
    anchor = reduced.anchor
    x0 = scipy.linalg.lstsq(anchor, np.ones(anchor.shape[0]))[0]
    free = scipy.linalg.null_space(anchor)
    if free.shape[1] == 0:
        eps_min = float(np.linalg.norm(reduced.M @ x0))
        return AnchoredGeometry(x0, eps_min, free, 0)
    resid = reduced.M @ x0
    left, sing, right = _full_svd(reduced.M @ free)
    rank = _numerical_rank(sing)
    step = right[:, :rank] @ ((left[:, :rank].T @ resid) / sing[:rank])
    x_ls = x0 - free @ step
    coords = np.hstack((right[:, :rank] / sing[:rank], right[:, rank:]))
    return AnchoredGeometry(
        x_ls=x_ls,
        eps_min=float(np.linalg.norm(reduced.M @ x_ls)),
        basis=free @ coords,
        rank=rank,
    )


def minimal_epsilon_point(
    reduced: ReducedProblem,
) -> tuple[np.ndarray, float]:
    """Anchored point of least commutator norm.

    Solves ``min ||M x||_2`` subject to ``anchor @ x == 1``. Returns the
    minimizer and ``epsilon_min``, the smallest radius for which the robust
    program is feasible.
    """
    geometry = anchored_geometry(reduced)
    return geometry.x_ls, geometry.eps_min


@dataclass
class RobustSolver(ADMMSolver):
    """ADMM for ``min ||R x||_1`` s.t. ``||M x||_2 <= eps``, anchored.

    The anchor is eliminated with :func:`anchored_geometry`, which turns
    the ellipsoid ``||M x|| <= eps`` into the ball ``||y[:rank]|| <= r``
    with ``r = sqrt(eps^2 - eps_min^2)``. The splitting runs on
    ``t = A y + c`` (soft-thresholding, ``A = R basis``) and ``v = g y``
    (projection onto the scaled ball), where ``g = ||A||_2`` balances the
    two blocks. ``A^T A + g^2 I`` does not depend on ``rho`` and is
    factored once. Iterates are over-relaxed by ``config.relaxation``.

    Every ``check_every`` iterations the sign pattern of ``t`` is frozen
    and the linear program it induces over the ball is solved in closed
    form. The run stops when the relative gap between the best feasible
    point and a dual bound is below ``tol_primal``, or when both ADMM
    residuals are below tolerance. Every returned point is feasible, and
    its objective never exceeds that of the minimal-epsilon point.
    """

    default_tol = 1e-8

    def solve(
        self, problem: ReducedProblem, epsilon: float | None = None
    ) -> Solution:
        epsilon = self.config.epsilon_n if epsilon is None else epsilon
        if epsilon < 0:
            raise ValueError(
                f"`epsilon` must be nonnegative. Got: {epsilon}."
            )
        self.rho = self.config.rho
        geometry = anchored_geometry(problem)
        x_ls, eps_min = geometry.x_ls, geometry.eps_min
        if epsilon < eps_min * (1.0 - RANK_TOL) - EPSILON_ABS_TOL * max(
            1.0, _spectral_norm(problem.M)
        ):
            raise InfeasibleEpsilon(epsilon, eps_min)
        radius = sqrt(max(epsilon**2 - eps_min**2, 0.0))
        n_ball = geometry.rank
        n_dim = geometry.basis.shape[1]
        self.iterations = 0
        if n_dim == 0:
            return self._finish(
                _solution(problem, x_ls, 0, 0.0, 0.0, True).with_epsilon(
                    epsilon
                )
            )

        a_full = problem.R @ geometry.basis
        c_full = problem.R @ x_ls
        row_norm = np.abs(a_full).max(axis=1)
        active = row_norm > ROW_TOL * row_norm.max()
        a_mat = np.ascontiguousarray(a_full[active])
        c_vec = np.ascontiguousarray(c_full[active])
        offset = float(np.abs(c_full[~active]).sum())
        gain = _spectral_norm(a_mat) or 1.0
        factor = scipy.linalg.cho_factor(
            a_mat.T @ a_mat + gain**2 * np.eye(n_dim)
        )
        relax = self.config.relaxation

        def objective(y: np.ndarray) -> float:
            return float(np.abs(a_mat @ y + c_vec).sum()) + offset

        def feasible(y: np.ndarray) -> bool:
            return bool(
                np.linalg.norm(y[:n_ball]) <= radius * (1.0 + BALL_TOL)
            )

        def project(w: np.ndarray) -> np.ndarray:
            out = w.copy()
            out[:n_ball] = project_ball(
                np.ascontiguousarray(w[:n_ball]), gain * radius
            )
            return out

        y = np.zeros(n_dim)
        t = c_vec.copy()
        v = np.zeros(n_dim)
        u_t = np.zeros_like(t)
        u_v = np.zeros(n_dim)
        best_y, best_obj = y, objective(y)
        polished_pattern = None
        primal = dual = np.inf
        converged = False
        for it in range(1, self.config.max_iters + 1):
            self.iterations = it
            y = scipy.linalg.cho_solve(
                factor, a_mat.T @ (t - u_t - c_vec) + gain * (v - u_v)
            )
            fit_t = a_mat @ y + c_vec
            fit_v = gain * y
            hat_t = relax * fit_t + (1.0 - relax) * t
            hat_v = relax * fit_v + (1.0 - relax) * v
            t_old, v_old = t, v
            t = soft_threshold(hat_t + u_t, 1.0 / self.rho)
            v = project(hat_v + u_v)
            u_t = u_t + hat_t - t
            u_v = u_v + hat_v - v
            res_t, res_v = fit_t - t, fit_v - v
            primal, dual = relative_residuals(
                sqrt(res_t @ res_t + res_v @ res_v),
                max(
                    sqrt(fit_t @ fit_t + fit_v @ fit_v),
                    sqrt(t @ t + v @ v),
                ),
                self.rho
                * float(
                    np.linalg.norm(
                        a_mat.T @ (t - t_old) + gain * (v - v_old)
                    )
                ),
                self.rho
                * float(np.linalg.norm(a_mat.T @ u_t + gain * u_v)),
            )
            self._print_progress(objective(v / gain), primal, dual)
            if self._converged(primal, dual):
                converged = True
                break
            if it % self.config.check_every:
                continue
            candidates = [v / gain]
            pattern = np.sign(t).astype(np.int8).tobytes()
            if pattern != polished_pattern:
                polished_pattern = pattern
                candidates.append(_polish(a_mat, c_vec, t, radius, n_ball))
            for cand in candidates:
                if cand is None or not feasible(cand):
                    continue
                obj = objective(cand)
                if obj < best_obj:
                    best_y, best_obj = cand, obj
            lower = offset + max(
                _dual_bound(a_mat, c_vec, lam, radius, n_ball)
                for lam in (
                    self.rho * u_t,
                    _kkt_multiplier(a_mat, c_vec, best_y, radius, n_ball),
                )
            )
            if best_obj - lower <= self.tol_primal * max(1.0, best_obj):
                converged = True
                break
            factor_u = self._update_rho(primal, dual)
            u_t, u_v = u_t * factor_u, u_v * factor_u

        for cand in (v / gain, _polish(a_mat, c_vec, t, radius, n_ball)):
            if cand is None or not feasible(cand):
                continue
            obj = objective(cand)
            if obj < best_obj:
                best_y, best_obj = cand, obj
        x = x_ls + geometry.basis @ best_y
        x = restore_feasibility(problem.M, x, x_ls, epsilon, eps_min)
        return self._finish(
            _solution(
                problem, x, self.iterations, primal, dual, converged
            ).with_epsilon(epsilon)
        )


def solve_robust(
    reduced: ReducedProblem,
    config: SolverConfig | None = None,
    epsilon: float | None = None,
) -> Solution:
    """Solve the robust program with :class:`RobustSolver`.

    ``epsilon`` overrides ``config.epsilon_n``.
    """
    return RobustSolver(config or SolverConfig()).solve(reduced, epsilon)


def restore_feasibility(
    m_mat: np.ndarray,
    x: np.ndarray,
    x_ls: np.ndarray,
    epsilon: float,
    eps_min: float,
) -> np.ndarray:
    """Smallest step from ``x`` towards ``x_ls`` with ``||M x|| <= eps``."""
    start = m_mat @ x
    norm = float(np.linalg.norm(start))
    if norm <= epsilon:
        return x
    target = max(epsilon * (1.0 - 1e-12), eps_min)
    if target >= norm:
        return x
    direction = m_mat @ (x_ls - x)
    quad = float(direction @ direction)
    lin = 2.0 * float(start @ direction)
    const = norm**2 - target**2
    disc = max(lin**2 - 4.0 * quad * const, 0.0)
    denom = -lin + sqrt(disc)
    theta = 2.0 * const / denom if denom > 0 else 1.0
    theta = min(max(theta, 0.0), 1.0)
    return (1.0 - theta) * x + theta * x_ls


def _polish(
    a_mat: np.ndarray,
    c_vec: np.ndarray,
    t: np.ndarray,
    radius: float,
    n_ball: int,
) -> np.ndarray | None:
    """Minimize over the ball with the sign pattern of ``t`` frozen.

    Entries where ``t`` vanishes are held at zero and the others keep
    their sign, which makes the objective linear. Returns None when that
    linear program is inconsistent or unbounded.
    """
    zeros = t == 0.0
    gradient = a_mat[~zeros].T @ np.sign(t[~zeros])
    n_dim = a_mat.shape[1]
    if zeros.any():
        a_zero, c_zero = a_mat[zeros], c_vec[zeros]
        start = scipy.linalg.lstsq(a_zero, -c_zero, cond=ROW_TOL)[0]
        if np.linalg.norm(a_zero @ start + c_zero) > CONSISTENCY_TOL * max(
            1.0, float(np.linalg.norm(c_zero))
        ):
            return None
        null = scipy.linalg.null_space(a_zero, rcond=ROW_TOL)
    else:
        start, null = np.zeros(n_dim), np.eye(n_dim)
    if null.shape[1] == 0:
        return start
    h_vec = null.T @ gradient
    left, sing, right = _full_svd(null[:n_ball])
    rank = _numerical_rank(sing)
    unseen = right[:, rank:].T @ h_vec
    if np.linalg.norm(unseen) > RANK_TOL * max(
        1.0, float(np.linalg.norm(h_vec))
    ):
        return None
    start_ball = start[:n_ball]
    proj = left[:, :rank].T @ start_ball
    perp = start_ball - left[:, :rank] @ proj
    slack = radius**2 - float(perp @ perp)
    if slack < 0:
        return None
    direction = (right[:, :rank].T @ h_vec) / sing[:rank]
    norm = float(np.linalg.norm(direction))
    target = -sqrt(slack) * direction / norm if norm > 0 else proj
    return start + null @ (right[:, :rank] @ ((target - proj) / sing[:rank]))


def _kkt_multiplier(
    a_mat: np.ndarray,
    c_vec: np.ndarray,
    y: np.ndarray,
    radius: float,
    n_ball: int,
) -> np.ndarray:
    """Multiplier matching the sign pattern of ``A y + c``."""
    extra = None
    if n_ball and radius > 0:
        y_ball = y[:n_ball]
        if np.linalg.norm(y_ball) >= radius * (1.0 - RANK_TOL):
            extra = np.concatenate((y_ball, np.zeros(y.size - n_ball)))
    return pattern_multiplier(a_mat, a_mat @ y + c_vec, extra)


def _dual_bound(
    a_mat: np.ndarray,
    c_vec: np.ndarray,
    multiplier: np.ndarray,
    radius: float,
    n_ball: int,
) -> float:
    """Lower bound ``lam^T c - r ||(A^T lam)[:rank]||``.

    ``lam`` is the multiplier made dual feasible: ``||lam||_inf <= 1`` and
    ``A^T lam`` vanishing along the coordinates outside the ball.
    """
    lam = multiplier
    free = a_mat[:, n_ball:]
    if free.shape[1]:
        lam = lam - free @ scipy.linalg.lstsq(free, lam, cond=ROW_TOL)[0]
    lam = lam / max(1.0, float(np.abs(lam).max(initial=0.0)))
    grad = a_mat[:, :n_ball].T @ lam
    return float(lam @ c_vec) - radius * float(np.linalg.norm(grad))


def _full_svd(
    matrix: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin left factor, singular values and a square right factor."""
    n_rows, n_cols = matrix.shape
    padded = matrix
    if n_rows < n_cols:
        padded = np.vstack((matrix, np.zeros((n_cols - n_rows, n_cols))))
    left, sing, right_t = scipy.linalg.svd(padded, full_matrices=False)
    return left[:n_rows], sing, right_t.T


def _numerical_rank(sing: np.ndarray) -> int:
    if sing.size == 0 or sing[0] <= 0:
        return 0
    return int(np.sum(sing > RANK_TOL * sing[0]))


def _spectral_norm(matrix: np.ndarray) -> float:
    sing = scipy.linalg.svdvals(matrix)
    return float(sing[0]) if sing.size else 0.0


def _solution(
    reduced: ReducedProblem,
    x: np.ndarray,
    iterations: int,
    primal: float,
    dual: float,
    converged: bool,
) -> Solution:
    s = reduced.expand(x)
    matrices = symmetrize_hollow(unvec_stack(s, reduced.n_nodes))
    feasibility = Feasibility(
        commutator_residual=reduced.commutator_norm(x),
        symmetry_residual=0.0,
        diag_residual=0.0,
        scale_residual=float(
            np.abs(reduced.anchor @ x - 1.0).max(initial=0.0)
        ),
    )
    return Solution(
        shifts=GraphEnsemble.from_matrices(
            matrices, reduced.alpha, reduced.beta or {}
        ),
        objective=reduced.objective(x),
        iterations=iterations,
        primal_residual=float(primal),
        dual_residual=float(dual),
        feasibility=feasibility,
        converged=converged,
    )
