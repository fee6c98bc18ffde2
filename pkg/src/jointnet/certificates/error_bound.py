"""Constants of the error bound for the robust program."""
from dataclasses import asdict, dataclass
from math import log, sqrt

import numpy as np
import scipy.linalg

from jointnet.exceptions import EmptySupport, RankDeficientM
from jointnet.graphs import CovarianceSet, GraphEnsemble
from jointnet.operators import ReducedProblem
from jointnet.operators.problem import SUPPORT_TOL

RANK_TOL = 1e-9


@dataclass(frozen=True)
class RobustBoundReport:
    """Constants of the bound ``sum_k ||vec(S_hat - S*)||_1 <= gamma eps``.

    ``epsilon_floor`` is the high-probability scale of ``eps`` with the
    unknown universal constant set to one. It is reported, never used to
    decide anything.
    """

    m_full_col_rank: bool
    sigma_min_M: float
    sigma_max_R: float
    pinv_R_l1norm: float
    k_support_size: int
    gamma_robust: float
    omega: float
    epsilon_floor: float
    epsilon_n: float | None = None

    @property
    def bound(self) -> float | None:
        if self.epsilon_n is None:
            return None
        return self.gamma_robust * self.epsilon_n

    def bound_holds(self, error: float, epsilon: float | None = None) -> bool:
        """Whether an observed l1 error respects ``gamma * epsilon``."""
        epsilon = self.epsilon_n if epsilon is None else epsilon
        if epsilon is None:
            raise ValueError("`epsilon` must be given. Got: None.")
        return error <= self.gamma_robust * epsilon

    def to_dict(self) -> dict:
        report = asdict(self)
        report["bound"] = self.bound
        return report


def robust_gamma(
    k_support_size: int,
    sigma_max_R: float,
    pinv_R_l1norm: float,
    sigma_min_M: float,
) -> float:
    """``4 sqrt|K| sigma_max(R) ||R^+||_1 (2 + sqrt|K|) / sigma_min(M)``."""
    root = sqrt(k_support_size)
    return (
        4.0
        * root
        * sigma_max_R
        * pinv_R_l1norm
        * (2.0 + root)
        / sigma_min_M
    )


def omega_constant(
    model_covariances: CovarianceSet, shifts: GraphEnsemble
) -> float:
    """``max_k max(max_i C_ii, max_i [S C S]_ii)`` over all graphs."""
    omega = 0.0
    for cov, shift in zip(
        model_covariances.matrices, shifts.matrices, strict=True
    ):
        sandwich = shift @ cov @ shift
        omega = max(omega, float(np.max(np.diag(cov))))
        omega = max(omega, float(np.max(np.diag(sandwich))))
    return omega


def theorem2_bound(
    reduced: ReducedProblem,
    s_star_L: np.ndarray,
    model_C: CovarianceSet,
    S_star: GraphEnsemble,
    n_total: int,
    epsilon_n: float | None = None,
) -> RobustBoundReport:
    """Evaluate the constants of the robust error bound.

    Parameters
    ----------
    reduced : ReducedProblem
        Reduced operators built from sample covariances.
    s_star_L : numpy.ndarray
        Lower-triangular entries of the ground truth.
    model_C : CovarianceSet
        Model covariances of the ground truth.
    S_star : GraphEnsemble
        Ground truth GSOs.
    n_total : int
        Total number of signals over all graphs.
    epsilon_n : float | None
        Constraint radius the robust program was solved with. Default:
        None.

    Raises
    ------
    RankDeficientM
        If ``sigma_min(M) < 1e-9 sigma_max(M)``.
    EmptySupport
        If ``R s*_L`` has no entry above ``SUPPORT_TOL``.
    """
    if n_total < 1:
        raise ValueError(f"`n_total` must be positive. Got: {n_total}.")
    sing_m = scipy.linalg.svdvals(reduced.M)
    if sing_m.size == 0 or sing_m[-1] <= RANK_TOL * sing_m[0]:
        ratio = sing_m[-1] / sing_m[0] if sing_m.size and sing_m[0] else 0.0
        raise RankDeficientM(ratio)
    sigma_max_r = float(scipy.linalg.svdvals(reduced.R)[0])
    pinv_l1 = float(
        np.abs(scipy.linalg.pinv(reduced.R)).sum(axis=0).max(initial=0.0)
    )
    r_s = reduced.R @ np.asarray(s_star_L, dtype=float)
    k_support = int(np.count_nonzero(np.abs(r_s) > SUPPORT_TOL))
    if k_support == 0:
        raise EmptySupport(float(np.abs(r_s).max(initial=0.0)))
    sigma_min_m = float(sing_m[-1])
    omega = omega_constant(model_C, S_star)
    n_nodes, k_graphs = reduced.n_nodes, reduced.k_graphs
    return RobustBoundReport(
        m_full_col_rank=True,
        sigma_min_M=sigma_min_m,
        sigma_max_R=sigma_max_r,
        pinv_R_l1norm=pinv_l1,
        k_support_size=k_support,
        gamma_robust=robust_gamma(
            k_support, sigma_max_r, pinv_l1, sigma_min_m
        ),
        omega=omega,
        epsilon_floor=n_nodes
        * omega
        * sqrt(k_graphs * log(n_nodes) / n_total),
        epsilon_n=None if epsilon_n is None else float(epsilon_n),
    )
