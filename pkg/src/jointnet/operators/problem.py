"""Vectorized and reduced forms of the joint inference programs.

The noiseless program is the l1-analysis problem

    min ||Psi s||_1  s.t.  Phi s = b,

over the stacked vectorization ``s`` of all K GSOs. The robust program is
posed over the strictly lower-triangular entries ``s_L`` only:

    min ||R s_L||_1  s.t.  ||M s_L||_2 <= eps,  A s_L = 1,

where ``A`` is the scale anchor. Symmetry and the zero diagonal hold by
construction in the reduced form.
"""
from dataclasses import dataclass
from math import comb
from typing import Literal, Mapping, Sequence

import numpy as np

from jointnet.graphs.graph_types import CovarianceSet, beta_pairs
from jointnet.operators.vectorize import (
    _as_matrices,
    build_B,
    build_Sigma,
    build_Z,
    diag_indices,
    lower_indices,
    stacked,
    upper_indices,
    vec,
)

SUPPORT_TOL = 1e-9

AnchorMode = Literal["first", "each"]


@dataclass(frozen=True, eq=False)
class VectorizedProblem:
    """Matrices of the noiseless program ``min ||Psi s||_1, Phi s = b``."""

    Psi: np.ndarray
    Phi: np.ndarray
    b: np.ndarray
    n_nodes: int
    k_graphs: int
    anchor: AnchorMode = "first"

    def __post_init__(self) -> None:
        n_var = self.k_graphs * self.n_nodes**2
        n_rows = (self.k_graphs + comb(self.k_graphs, 2)) * self.n_nodes**2
        if self.Psi.shape != (n_rows, n_var):
            raise ValueError(
                f"`Psi` must have shape {(n_rows, n_var)}. Got:"
                f" {self.Psi.shape}."
            )
        if self.Phi.shape != (self.b.size, n_var):
            raise ValueError(
                f"`Phi` must have {n_var} columns and one row per entry of"
                f" `b`. Got: {self.Phi.shape} and {self.b.size}."
            )

    @property
    def n_variables(self) -> int:
        return self.Phi.shape[1]

    @property
    def commutator_rows(self) -> slice:
        """Rows of ``Phi`` holding the block-diagonal ``Sigma``."""
        start = self.k_graphs * (comb(self.n_nodes, 2) + self.n_nodes)
        return slice(start, start + self.k_graphs * self.n_nodes**2)

    @property
    def anchor_rows(self) -> slice:
        """Rows of ``Phi`` holding the scale constraint."""
        return slice(self.commutator_rows.stop, self.Phi.shape[0])

    def objective(self, s: np.ndarray) -> float:
        return float(np.abs(self.Psi @ s).sum())

    def constraint_residual(self, s: np.ndarray) -> float:
        return float(np.linalg.norm(self.Phi @ s - self.b))


@dataclass(frozen=True, eq=False)
class ReducedProblem:
    """Matrices of the robust program over lower-triangular entries.

    Attributes
    ----------
    R : numpy.ndarray
        Columns of ``Psi`` at the lower-triangular positions.
    M : numpy.ndarray
        Sum of the ``Sigma`` columns at mirror-aligned lower and upper
        positions; ``M s_L == Sigma s`` for symmetric hollow ``s``.
    anchor : numpy.ndarray of shape (n_anchors, K * N * (N - 1) / 2)
        Scale constraint rows, ``anchor @ s_L == 1``.
    lower, upper, diag : numpy.ndarray
        Positions of ``L``, ``U`` and ``D`` within the stacked
        vectorization.
    alpha, beta : numpy.ndarray, dict
        Objective weights the analysis operator was built with.
    """

    R: np.ndarray
    M: np.ndarray
    anchor: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    diag: np.ndarray
    n_nodes: int
    k_graphs: int
    alpha: np.ndarray | None = None
    beta: Mapping[tuple[int, int], float] | None = None

    @property
    def n_variables(self) -> int:
        return self.lower.size

    def expand(self, s_lower: np.ndarray) -> np.ndarray:
        """Full stacked vectorization of a symmetric hollow ensemble."""
        full = np.zeros(self.k_graphs * self.n_nodes**2)
        full[self.lower] = s_lower
        full[self.upper] = s_lower
        return full

    def restrict(self, s: np.ndarray) -> np.ndarray:
        """Lower-triangular entries of a stacked vectorization."""
        return np.asarray(s)[self.lower]

    def objective(self, s_lower: np.ndarray) -> float:
        return float(np.abs(self.R @ s_lower).sum())

    def commutator_norm(self, s_lower: np.ndarray) -> float:
        return float(np.linalg.norm(self.M @ s_lower))

    def with_M(self, m_mat: np.ndarray) -> "ReducedProblem":
        return ReducedProblem(
            R=self.R,
            M=m_mat,
            anchor=self.anchor,
            lower=self.lower,
            upper=self.upper,
            diag=self.diag,
            n_nodes=self.n_nodes,
            k_graphs=self.k_graphs,
            alpha=self.alpha,
            beta=self.beta,
        )


@dataclass(frozen=True, eq=False)
class SupportSets:
    """Supports of ``s*`` (J), ``Psi s*`` (I) and ``R s*_L`` (K)."""

    J: np.ndarray
    I: np.ndarray
    K: np.ndarray


def build_Psi(
    alpha: Sequence[float] | np.ndarray,
    beta: Mapping[tuple[int, int], float] | Sequence[float] | np.ndarray,
    k_graphs: int,
    n_nodes: int,
) -> np.ndarray:
    """Analysis operator ``[diag(alpha); diag(beta) Z] (x) I_{N^2}``.

    ``beta`` is either a mapping from 0-based graph pairs to weights or a
    vector ordered like the rows of ``build_Z``.
    """
    return np.kron(
        _weight_blocks(alpha, beta, k_graphs), np.eye(n_nodes**2)
    )


def build_Psi_weighted(
    alpha: Sequence[float] | np.ndarray,
    beta: Mapping[tuple[int, int], float] | Sequence[float] | np.ndarray,
    distances: Sequence[np.ndarray],
    eta: float,
) -> np.ndarray:
    """Analysis operator with a smoothness-weighted sparsity block.

    The k-th sparsity block ``alpha_k I`` becomes
    ``alpha_k diag(1 + eta vec(Z^(k)))`` where ``Z^(k)`` holds squared
    distances between the node signals of graph k. With ``eta == 0`` this
    equals :func:`build_Psi`.
    """
    if eta < 0:
        raise ValueError(f"`eta` must be nonnegative. Got: {eta}.")
    k_graphs = len(distances)
    n_nodes = np.asarray(distances[0]).shape[0]
    psi = build_Psi(alpha, beta, k_graphs, n_nodes)
    n_sq = n_nodes**2
    alpha = np.asarray(alpha, dtype=float)
    for k, dist in enumerate(distances):
        block = slice(k * n_sq, (k + 1) * n_sq)
        psi[block, block] = np.diag(
            alpha[k] * (1.0 + eta * vec(np.asarray(dist, dtype=float)))
        )
    return psi


def psi_weights(
    psi: np.ndarray, k_graphs: int, n_nodes: int
) -> tuple[np.ndarray, dict[tuple[int, int], float]]:
    """Recover ``alpha`` and ``beta`` from an analysis operator.

    Reads the entries at the first vectorized position of each block, which
    the smoothness weighting leaves untouched (a node has zero distance to
    itself).
    """
    n_sq = n_nodes**2
    alpha = np.array([psi[k * n_sq, k * n_sq] for k in range(k_graphs)])
    beta = {
        pair: float(abs(psi[(k_graphs + row) * n_sq, pair[0] * n_sq]))
        for row, pair in enumerate(beta_pairs(k_graphs))
    }
    return alpha, beta


def build_anchor_row(
    n_nodes: int, k_graphs: int, mode: AnchorMode = "first"
) -> np.ndarray:
    """Rows selecting the first column of the anchored GSOs."""
    graphs = _anchored_graphs(k_graphs, mode)
    rows = np.zeros((len(graphs), k_graphs * n_nodes**2))
    for row, k in enumerate(graphs):
        start = k * n_nodes**2
        rows[row, start : start + n_nodes] = 1.0
    return rows


def build_Phi(
    covariances: CovarianceSet | Sequence[np.ndarray],
    psi: np.ndarray | None = None,
    anchor: AnchorMode = "first",
) -> VectorizedProblem:
    """Stack the constraints of the noiseless program.

    Rows are, in order: symmetry ``I_K (x) B``, hollowness
    ``I_K (x) [I]_{D'}``, commutativity ``Sigma`` and the scale anchor.
    ``b`` is zero except for a one per anchor row at its end.

    Parameters
    ----------
    covariances : CovarianceSet | sequence of numpy.ndarray
        Covariances of the K graphs.
    psi : numpy.ndarray | None
        Analysis operator to bundle with the constraints. Default: unit
        weights on every sparsity and every pairwise term.
    anchor : {'first', 'each'}
        'first' anchors graph 1 only (a single scale row); 'each' anchors
        every graph to its own first-column sum.
    """
    matrices = _as_matrices(covariances)
    k_graphs, n_nodes = len(matrices), matrices[0].shape[0]
    eye_k = np.eye(k_graphs)
    diag_select = np.eye(n_nodes**2)[diag_indices(n_nodes)]
    phi = np.vstack(
        (
            np.kron(eye_k, build_B(n_nodes)),
            np.kron(eye_k, diag_select),
            build_Sigma(matrices),
            build_anchor_row(n_nodes, k_graphs, anchor),
        )
    )
    n_anchor = len(_anchored_graphs(k_graphs, anchor))
    rhs = np.zeros(phi.shape[0])
    rhs[-n_anchor:] = 1.0
    if psi is None:
        psi = build_Psi(
            np.ones(k_graphs),
            np.ones(comb(k_graphs, 2)),
            k_graphs,
            n_nodes,
        )
    return VectorizedProblem(
        Psi=psi,
        Phi=phi,
        b=rhs,
        n_nodes=n_nodes,
        k_graphs=k_graphs,
        anchor=anchor,
    )


def build_reduced(
    covariances: CovarianceSet | Sequence[np.ndarray],
    psi: np.ndarray,
    anchor: AnchorMode = "first",
) -> ReducedProblem:
    """Reduce the robust program to the lower-triangular entries."""
    matrices = _as_matrices(covariances)
    k_graphs, n_nodes = len(matrices), matrices[0].shape[0]
    if psi.shape[1] != k_graphs * n_nodes**2:
        raise ValueError(
            f"`psi` must have {k_graphs * n_nodes**2} columns. Got:"
            f" {psi.shape[1]}."
        )
    lower = stacked(lower_indices(n_nodes), n_nodes, k_graphs)
    upper = stacked(upper_indices(n_nodes), n_nodes, k_graphs)
    sigma = build_Sigma(matrices)
    n_pairs = comb(n_nodes, 2)
    alpha, beta = psi_weights(psi, k_graphs, n_nodes)
    graphs = _anchored_graphs(k_graphs, anchor)
    anchor_rows = np.zeros((len(graphs), k_graphs * n_pairs))
    for row, k in enumerate(graphs):
        # pairs (0, j) come first, i.e. S[j, 0] for j = 1..N-1
        anchor_rows[row, k * n_pairs : k * n_pairs + n_nodes - 1] = 1.0
    return ReducedProblem(
        R=psi[:, lower],
        M=sigma[:, lower] + sigma[:, upper],
        anchor=anchor_rows,
        lower=lower,
        upper=upper,
        diag=stacked(diag_indices(n_nodes), n_nodes, k_graphs),
        n_nodes=n_nodes,
        k_graphs=k_graphs,
        alpha=alpha,
        beta=beta,
    )


def support_sets(
    s_star: np.ndarray,
    psi: np.ndarray,
    reduced: ReducedProblem | None = None,
    tol: float = SUPPORT_TOL,
) -> SupportSets:
    """Index sets of the nonzero entries of ``s*``, ``Psi s*`` and
    ``R s*_L`` (entries with ``|x| > tol``)."""
    s_star = np.asarray(s_star, dtype=float)
    k_support = np.array([], dtype=int)
    if reduced is not None:
        r_s = reduced.R @ reduced.restrict(s_star)
        k_support = np.flatnonzero(np.abs(r_s) > tol)
    return SupportSets(
        J=np.flatnonzero(np.abs(s_star) > tol),
        I=np.flatnonzero(np.abs(psi @ s_star) > tol),
        K=k_support,
    )


def _weight_blocks(
    alpha: Sequence[float] | np.ndarray,
    beta: Mapping[tuple[int, int], float] | Sequence[float] | np.ndarray,
    k_graphs: int,
) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (k_graphs,):
        raise ValueError(
            f"`alpha` must hold {k_graphs} values. Got: {alpha.shape}."
        )
    if isinstance(beta, Mapping):
        beta_vec = np.array(
            [beta.get(pair, 0.0) for pair in beta_pairs(k_graphs)],
            dtype=float,
        )
    else:
        beta_vec = np.asarray(beta, dtype=float).reshape(-1)
    if beta_vec.size != comb(k_graphs, 2):
        raise ValueError(
            f"`beta` must hold {comb(k_graphs, 2)} values. Got:"
            f" {beta_vec.size}."
        )
    return np.vstack((np.diag(alpha), np.diag(beta_vec) @ build_Z(k_graphs)))


def _anchored_graphs(k_graphs: int, mode: AnchorMode) -> list[int]:
    if mode == "first":
        return [0]
    if mode == "each":
        return list(range(k_graphs))
    raise ValueError(f"`anchor` must be `first` or `each`. Got: {mode}.")
