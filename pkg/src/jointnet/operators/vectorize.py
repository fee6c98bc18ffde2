"""Vectorization and the structural matrices B, Z and Sigma.

All vectorizations stack columns (``vec(S)[j * N + i] == S[i, j]``).
Node pairs ``(i, j)`` with ``i < j`` and graph pairs ``(k, k')`` with
``k < k'`` are always enumerated in lexicographic order.
"""
from typing import Sequence

import numpy as np
import scipy.linalg

from jointnet.graphs.graph_types import CovarianceSet


def vec(matrix: np.ndarray) -> np.ndarray:
    """Stack the columns of ``matrix`` into a vector."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray, n_nodes: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec` for square matrices."""
    vector = np.asarray(vector)
    if n_nodes is None:
        n_nodes = int(round(np.sqrt(vector.size)))
    if vector.size != n_nodes**2:
        raise ValueError(
            f"Vector length must be a square number. Got: {vector.size}."
        )
    return vector.reshape((n_nodes, n_nodes), order="F")


def unvec_stack(vector: np.ndarray, n_nodes: int) -> list[np.ndarray]:
    """Split a stacked vectorization into its square matrices."""
    n_sq = n_nodes**2
    return [
        unvec(vector[start : start + n_sq], n_nodes)
        for start in range(0, vector.size, n_sq)
    ]


def node_pairs(n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``i`` and columns ``j`` of all pairs ``i < j``."""
    return np.triu_indices(n_nodes, k=1)


def diag_indices(n_nodes: int) -> np.ndarray:
    """Vectorized positions of the diagonal (0-based ``D'``)."""
    return np.arange(n_nodes) * (n_nodes + 1)


def lower_indices(n_nodes: int) -> np.ndarray:
    """Vectorized positions of ``S[j, i]`` for every pair ``i < j``."""
    rows, cols = node_pairs(n_nodes)
    return rows * n_nodes + cols


def upper_indices(n_nodes: int) -> np.ndarray:
    """Vectorized positions of ``S[i, j]`` for every pair ``i < j``.

    ``upper_indices(n)[u]`` and ``lower_indices(n)[u]`` address the two
    mirror entries of the same node pair.
    """
    rows, cols = node_pairs(n_nodes)
    return cols * n_nodes + rows


def stacked(indices: np.ndarray, n_nodes: int, k_graphs: int) -> np.ndarray:
    """Repeat per-graph positions for every block of a stacked vector."""
    offsets = np.arange(k_graphs) * n_nodes**2
    return (offsets[:, None] + indices[None, :]).reshape(-1)


def build_B(n_nodes: int) -> np.ndarray:
    """Matrix whose null space holds the vectorized symmetric matrices.

    The row of pair ``(i, j)`` is ``+1`` at ``vec``-position of
    ``S[i, j]`` and ``-1`` at the position of ``S[j, i]``.
    """
    upper, lower = upper_indices(n_nodes), lower_indices(n_nodes)
    mat = np.zeros((upper.size, n_nodes**2))
    rows = np.arange(upper.size)
    mat[rows, upper] = 1.0
    mat[rows, lower] = -1.0
    return mat


def build_Z(k_graphs: int) -> np.ndarray:
    """Pairwise difference matrix over graphs, one row per ``k < k'``."""
    first, second = np.triu_indices(k_graphs, k=1)
    mat = np.zeros((first.size, k_graphs))
    rows = np.arange(first.size)
    mat[rows, first] = 1.0
    mat[rows, second] = -1.0
    return mat


def commutator_block(cov: np.ndarray) -> np.ndarray:
    """``-C (+) C = I (x) C - C (x) I``, mapping ``vec(S)`` to
    ``vec(C S - S C)``."""
    eye = np.eye(cov.shape[0])
    return np.kron(eye, cov) - np.kron(cov, eye)


def build_Sigma(
    covariances: CovarianceSet | Sequence[np.ndarray],
) -> np.ndarray:
    """Block-diagonal commutator matrix of all covariances."""
    matrices = _as_matrices(covariances)
    return scipy.linalg.block_diag(
        *(commutator_block(cov) for cov in matrices)
    )


def _as_matrices(
    covariances: CovarianceSet | Sequence[np.ndarray],
) -> list[np.ndarray]:
    if isinstance(covariances, CovarianceSet):
        return list(covariances.matrices)
    return [np.asarray(cov, dtype=float) for cov in covariances]
