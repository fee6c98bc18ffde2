"""Sufficient conditions for exact recovery by the noiseless program."""
from dataclasses import asdict, dataclass, field
from math import isfinite
from typing import Literal, Sequence

import numpy as np
import scipy.linalg

from jointnet.exceptions import InfeasibleGroundTruth, SingularSystem
from jointnet.operators import VectorizedProblem, support_sets

DELTA_GRID = tuple(10.0**exp for exp in range(-6, 4))
RANK_TOL = 1e-9
FEASIBILITY_TOL = 1e-8

CertificateStatus = Literal["certified", "indeterminate", "uncertified"]


@dataclass(frozen=True)
class CertificateReport:
    """Diagnostics of the exact recovery conditions for one instance.

    ``gamma_noiseless`` is the minimum of ``gamma(delta)`` over
    ``delta_grid`` and ``delta_used`` the grid point attaining it. Grid
    points at which the certificate system could not be factorized carry
    ``inf`` in ``gamma_by_delta``.
    """

    cond1_full_row_rank: bool
    gamma_noiseless: float | None
    delta_used: float | None
    cond2_satisfied: bool
    delta_grid: list[float]
    gamma_by_delta: list[float] = field(default_factory=list)
    support_size: int = 0
    analysis_support_size: int = 0

    @property
    def status(self) -> CertificateStatus:
        """``certified`` when both conditions hold. Failing the gamma
        condition alone is ``indeterminate`` since it is only sufficient.
        """
        if not self.cond1_full_row_rank:
            return "uncertified"
        if self.cond2_satisfied:
            return "certified"
        return "indeterminate"

    def to_dict(self) -> dict:
        """JSON-compatible dictionary; non-finite gammas become None."""
        report = asdict(self)
        report["gamma_by_delta"] = [
            gamma if isfinite(gamma) else None
            for gamma in self.gamma_by_delta
        ]
        report["status"] = self.status
        return report


def theorem1_check(
    problem: VectorizedProblem,
    s_star: np.ndarray,
    delta_grid: Sequence[float] = DELTA_GRID,
) -> CertificateReport:
    """Check the exact recovery conditions at a ground truth ``s*``.

    Condition 1 asks for ``[Phi^T]_J`` to have full row rank, with ``J``
    the support of ``s*``. Condition 2 asks for some ``delta > 0`` with

        gamma(delta) = || Psi_Ic (delta^-2 Phi^T Phi + Psi_Ic^T Psi_Ic)^-1
                          Psi_I^T ||_inf  <  1,

    where ``I`` is the support of ``Psi s*``, ``Ic`` its complement and the
    norm is the maximum absolute row sum.

    Parameters
    ----------
    problem : VectorizedProblem
        Operators built from the covariances of the instance.
    s_star : numpy.ndarray
        Stacked vectorization of the ground truth GSOs.
    delta_grid : sequence of float
        Values of ``delta`` examined. Default: ``1e-6, 1e-5, ..., 1e3``.

    Returns
    -------
    CertificateReport

    Raises
    ------
    InfeasibleGroundTruth
        If ``||Phi s* - b|| > 1e-8``.
    SingularSystem
        If ``Phi`` and ``Psi_Ic`` share a nonzero null vector, so that the
        system matrix is singular for every ``delta``.
    """
    s_star = np.asarray(s_star, dtype=float)
    residual = problem.constraint_residual(s_star)
    if residual > FEASIBILITY_TOL:
        raise InfeasibleGroundTruth(residual)
    supports = support_sets(s_star, problem.Psi)
    phi, psi = problem.Phi, problem.Psi
    cond1 = _full_column_rank(phi[:, supports.J])

    off_support = np.setdiff1d(np.arange(psi.shape[0]), supports.I)
    psi_off, psi_on = psi[off_support], psi[supports.I]
    gammas = _gamma_on_grid(phi, psi_off, psi_on, delta_grid)

    best = int(np.argmin(gammas)) if gammas else None
    gamma_min = None
    delta_used = None
    if best is not None and isfinite(gammas[best]):
        gamma_min = float(gammas[best])
        delta_used = float(delta_grid[best])
    return CertificateReport(
        cond1_full_row_rank=cond1,
        gamma_noiseless=gamma_min,
        delta_used=delta_used,
        cond2_satisfied=gamma_min is not None and gamma_min < 1.0,
        delta_grid=[float(delta) for delta in delta_grid],
        gamma_by_delta=gammas,
        support_size=int(supports.J.size),
        analysis_support_size=int(supports.I.size),
    )


def support_rank_condition(
    problem: VectorizedProblem, s_star: np.ndarray
) -> bool:
    """Whether the columns of ``Phi`` on the support of ``s*`` have full
    rank."""
    supports = support_sets(np.asarray(s_star, dtype=float), problem.Psi)
    return _full_column_rank(problem.Phi[:, supports.J])


def gamma_direct(
    phi: np.ndarray,
    psi_off: np.ndarray,
    psi_on: np.ndarray,
    delta: float,
) -> float:
    """Evaluate ``gamma(delta)`` by plain factorization of the system."""
    system = phi.T @ phi / delta**2 + psi_off.T @ psi_off
    factor = scipy.linalg.cho_factor(system)
    gain = psi_off @ scipy.linalg.cho_solve(factor, psi_on.T)
    return float(np.abs(gain).sum(axis=1).max(initial=0.0))


def _gamma_on_grid(
    phi: np.ndarray,
    psi_off: np.ndarray,
    psi_on: np.ndarray,
    delta_grid: Sequence[float],
) -> list[float]:
    """``gamma(delta)`` for every grid point.

    The system is factorized in the basis of right singular vectors of
    ``Phi``. Rows and columns in the row space of ``Phi`` are scaled by
    ``delta / sigma``, which keeps the factorized matrix well conditioned
    for small ``delta``.
    """
    _, sing, vt = scipy.linalg.svd(phi, full_matrices=False)
    rank = int(np.sum(sing > RANK_TOL * sing[0])) if sing.size else 0
    row_space, null_space = vt[:rank].T, vt[rank:].T
    if null_space.shape[1] and not _full_column_rank(psi_off @ null_space):
        raise SingularSystem()

    basis = np.hstack((row_space, null_space))
    off_basis = psi_off @ basis
    on_basis = psi_on @ basis
    quad = off_basis.T @ off_basis
    gammas = []
    for delta in delta_grid:
        scale = np.ones(basis.shape[1])
        scale[:rank] = delta / sing[:rank]
        system = scale[:, None] * quad * scale[None, :]
        system[:rank, :rank] += np.eye(rank)
        try:
            factor = scipy.linalg.cho_factor(system)
        except np.linalg.LinAlgError:
            gammas.append(float("inf"))
            continue
        gain = (off_basis * scale) @ scipy.linalg.cho_solve(
            factor, scale[:, None] * on_basis.T
        )
        gammas.append(float(np.abs(gain).sum(axis=1).max(initial=0.0)))
    return gammas


def _full_column_rank(matrix: np.ndarray) -> bool:
    if matrix.shape[1] == 0:
        return True
    if matrix.shape[0] < matrix.shape[1]:
        return False
    sing = scipy.linalg.svdvals(matrix)
    if sing[0] == 0.0:
        return False
    return bool(np.sum(sing > RANK_TOL * sing[0]) == matrix.shape[1])
