"""Value types for graphs, filters, signals and covariances."""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, Mapping, Sequence

import numpy as np

from jointnet.exceptions import AsymmetricInput, NonzeroDiagonal

SYMMETRY_TOL = 1e-10
COVARIANCE_SYMMETRY_TOL = 1e-12
PSD_TOL = 1e-10


def _frozen(arr: np.ndarray) -> np.ndarray:
    """Return a read-only float copy of ``arr``."""
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


def validate_gso(matrix: np.ndarray | Sequence) -> "GraphShift":
    """Validate a matrix as an undirected graph shift operator.

    Parameters
    ----------
    matrix : array-like of shape (n_nodes, n_nodes)
        Candidate adjacency-type matrix.

    Returns
    -------
    GraphShift
        The validated GSO. Asymmetry below ``1e-10`` is averaged out and
        diagonal entries below ``1e-10`` in magnitude are set to zero.

    Raises
    ------
    AsymmetricInput
        If ``max|S - S.T| > 1e-10``.
    NonzeroDiagonal
        If any ``|S_ii| >= 1e-10``.
    """
    weights = np.asarray(matrix, dtype=float)
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise ValueError(
            f"Graph shift operator must be a square matrix. Got shape:"
            f" {weights.shape}."
        )
    asymmetry = float(np.max(np.abs(weights - weights.T), initial=0.0))
    if asymmetry > SYMMETRY_TOL:
        raise AsymmetricInput(asymmetry)
    diagonal = float(np.max(np.abs(np.diag(weights)), initial=0.0))
    if diagonal >= SYMMETRY_TOL:
        raise NonzeroDiagonal(diagonal)
    weights = 0.5 * (weights + weights.T)
    np.fill_diagonal(weights, 0.0)
    return GraphShift(n_nodes=weights.shape[0], weights=weights)


@dataclass(frozen=True)
class GraphShift:
    """Symmetric hollow graph shift operator of one graph."""

    n_nodes: int
    weights: np.ndarray

    def __post_init__(self) -> None:
        weights = _frozen(self.weights)
        if weights.shape != (self.n_nodes, self.n_nodes):
            raise ValueError(
                f"`weights` must have shape ({self.n_nodes}, {self.n_nodes})."
                f" Got: {weights.shape}."
            )
        if self.n_nodes < 1:
            raise ValueError(
                f"`n_nodes` must be positive. Got: {self.n_nodes}."
            )
        if not np.array_equal(weights, weights.T):
            raise AsymmetricInput(
                float(np.max(np.abs(weights - weights.T)))
            )
        if np.any(np.diag(weights) != 0.0):
            raise NonzeroDiagonal(float(np.max(np.abs(np.diag(weights)))))
        object.__setattr__(self, "weights", weights)

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Node pairs ``(i, j)`` with ``i < j`` carrying an edge."""
        rows, cols = np.nonzero(np.triu(self.weights, k=1))
        return list(zip(rows.tolist(), cols.tolist()))

    @property
    def n_edges(self) -> int:
        """Number of undirected edges."""
        return int(np.count_nonzero(np.triu(self.weights, k=1)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphShift):
            return NotImplemented
        return self.n_nodes == other.n_nodes and np.array_equal(
            self.weights, other.weights
        )

    def __hash__(self) -> int:
        return hash((self.n_nodes, self.weights.tobytes()))


def beta_pairs(k_graphs: int) -> list[tuple[int, int]]:
    """Graph pairs ``(k, k')`` with ``k < k'`` in lexicographic order."""
    return list(combinations(range(k_graphs), 2))


def beta_preset(
    k_graphs: int, kind: Literal["complete", "path"], weight: float = 1.0
) -> dict[tuple[int, int], float]:
    """Similarity weights for a complete or a path similarity graph."""
    if kind == "complete":
        return {pair: weight for pair in beta_pairs(k_graphs)}
    if kind == "path":
        return {(k, k + 1): weight for k in range(k_graphs - 1)}
    raise ValueError(
        f"`kind` must be one of `complete` or `path`. Got: {kind}."
    )


@dataclass(frozen=True, eq=False)
class GraphEnsemble:
    """K graphs over a shared node set with objective weights.

    Graph indices are 0-based: ``beta[(0, 1)]`` weights the difference
    between the first and the second graph. Pairs missing from ``beta``
    have weight zero.
    """

    graphs: tuple[GraphShift, ...]
    alpha: np.ndarray = field(default=None)  # type: ignore[assignment]
    beta: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        graphs = tuple(self.graphs)
        if not graphs:
            raise ValueError("GraphEnsemble needs at least one graph.")
        n_nodes = {graph.n_nodes for graph in graphs}
        if len(n_nodes) != 1:
            raise ValueError(
                f"All graphs must share the node set. Got sizes: {n_nodes}."
            )
        k_graphs = len(graphs)
        alpha = (
            np.ones(k_graphs) if self.alpha is None else _frozen(self.alpha)
        )
        if alpha.shape != (k_graphs,) or np.any(alpha <= 0):
            raise ValueError(
                f"`alpha` must hold {k_graphs} positive values. Got:"
                f" {alpha}."
            )
        beta = {}
        for pair, weight in dict(self.beta).items():
            k, kp = (int(pair[0]), int(pair[1]))
            if not 0 <= k < kp < k_graphs:
                raise ValueError(
                    f"`beta` keys must be pairs (k, k') with 0 <= k < k' <"
                    f" {k_graphs}. Got: {pair}."
                )
            if weight < 0:
                raise ValueError(
                    f"`beta` weights must be nonnegative. Got: {weight}."
                )
            beta[(k, kp)] = float(weight)
        alpha = _frozen(alpha)
        object.__setattr__(self, "graphs", graphs)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_matrices(
        cls,
        matrices: Sequence[np.ndarray],
        alpha: Sequence[float] | np.ndarray | None = None,
        beta: Mapping[tuple[int, int], float]
        | Literal["complete", "path"] = "complete",
    ) -> "GraphEnsemble":
        """Validate ``matrices`` as GSOs and bundle them."""
        graphs = tuple(validate_gso(matrix) for matrix in matrices)
        if isinstance(beta, str):
            beta = beta_preset(len(graphs), beta)
        return cls(
            graphs=graphs,
            alpha=None if alpha is None else np.asarray(alpha, dtype=float),
            beta=beta,
        )

    @property
    def n_nodes(self) -> int:
        return self.graphs[0].n_nodes

    @property
    def k_graphs(self) -> int:
        return len(self.graphs)

    @property
    def matrices(self) -> list[np.ndarray]:
        return [graph.weights for graph in self.graphs]

    def beta_vector(self) -> np.ndarray:
        """Similarity weights ordered as the rows of ``build_Z``."""
        return np.array(
            [self.beta.get(pair, 0.0) for pair in beta_pairs(self.k_graphs)]
        )

    def stack(self) -> np.ndarray:
        """Column-major vectorizations of all GSOs, stacked."""
        return np.concatenate(
            [graph.weights.reshape(-1, order="F") for graph in self.graphs]
        )

    def with_graphs(self, matrices: Sequence[np.ndarray]) -> "GraphEnsemble":
        """Same weights, new GSOs."""
        return GraphEnsemble(
            graphs=tuple(validate_gso(matrix) for matrix in matrices),
            alpha=self.alpha,
            beta=self.beta,
        )


@dataclass(frozen=True)
class GraphFilter:
    """Polynomial graph filter ``H = sum_l h_l S^l``."""

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        coefficients = tuple(float(h) for h in self.coefficients)
        if len(coefficients) < 1:
            raise ValueError("GraphFilter needs at least one coefficient.")
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def n_taps(self) -> int:
        return len(self.coefficients)

    def matrix(self, shift: GraphShift) -> np.ndarray:
        """Evaluate the filter on ``shift`` by Horner's scheme."""
        weights = shift.weights
        filt = np.zeros_like(weights)
        for coefficient in reversed(self.coefficients):
            filt = filt @ weights
            filt[np.diag_indices_from(filt)] += coefficient
        return filt


@dataclass(frozen=True, eq=False)
class SignalEnsemble:
    """Per-graph signal matrices ``X^(k)`` of shape (n_nodes, n_k)."""

    signals: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        signals = tuple(_frozen(np.atleast_2d(x)) for x in self.signals)
        if not signals:
            raise ValueError("SignalEnsemble needs at least one matrix.")
        n_rows = {x.shape[0] for x in signals}
        if len(n_rows) != 1:
            raise ValueError(
                f"All signal matrices must have the same number of rows."
                f" Got: {n_rows}."
            )
        if any(x.shape[1] < 1 for x in signals):
            raise ValueError("Every graph needs at least one signal.")
        object.__setattr__(self, "signals", signals)

    @property
    def n_nodes(self) -> int:
        return self.signals[0].shape[0]

    @property
    def n_samples(self) -> list[int]:
        return [x.shape[1] for x in self.signals]

    @property
    def n_total(self) -> int:
        return sum(self.n_samples)


@dataclass(frozen=True, eq=False)
class CovarianceSet:
    """Model or sample covariance matrices, one per graph."""

    matrices: tuple[np.ndarray, ...]
    kind: Literal["model", "sample"] = "model"

    def __post_init__(self) -> None:
        if self.kind not in ("model", "sample"):
            raise ValueError(
                f"`kind` must be `model` or `sample`. Got: {self.kind}."
            )
        matrices = tuple(_frozen(cov) for cov in self.matrices)
        if not matrices:
            raise ValueError("CovarianceSet needs at least one matrix.")
        shapes = {cov.shape for cov in matrices}
        if len(shapes) != 1:
            raise ValueError(
                f"All covariances must share one shape. Got: {shapes}."
            )
        for cov in matrices:
            _check_covariance(cov)
        object.__setattr__(self, "matrices", matrices)

    @property
    def n_nodes(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def k_graphs(self) -> int:
        return len(self.matrices)


def _check_covariance(cov: np.ndarray) -> None:
    """Check symmetry and positive semidefiniteness of ``cov``."""
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError(
            f"Covariance must be a square matrix. Got shape: {cov.shape}."
        )
    scale = max(1.0, float(np.max(np.abs(cov), initial=0.0)))
    asymmetry = float(np.max(np.abs(cov - cov.T), initial=0.0))
    if asymmetry > COVARIANCE_SYMMETRY_TOL * scale:
        raise ValueError(
            f"Covariance must be symmetric. Got asymmetry: {asymmetry}."
        )
    eigvals = np.linalg.eigvalsh(0.5 * (cov + cov.T))
    if eigvals[0] < -PSD_TOL * max(eigvals[-1], 0.0):
        raise ValueError(
            "Covariance must be positive semidefinite. Got smallest"
            f" eigenvalue: {eigvals[0]}."
        )
