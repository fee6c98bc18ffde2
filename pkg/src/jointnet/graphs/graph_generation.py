"""Random graphs, filters, covariances and signals."""
from typing import Sequence

import numpy as np
import scipy.linalg
from sklearn.metrics.pairwise import euclidean_distances

from jointnet.exceptions import InsufficientEdges, IsolatedAnchorNode
from jointnet.graphs.graph_types import (
    CovarianceSet,
    GraphEnsemble,
    GraphFilter,
    GraphShift,
    SignalEnsemble,
    validate_gso,
)
from jointnet.rng import SEED_MODULUS, as_generator, make_rng

MAX_ANCHOR_RETRIES = 1000


def erdos_renyi(
    n: int, p: float, seed: int | np.random.Generator
) -> GraphShift:
    """Draw an unweighted Erdős–Rényi graph.

    Each of the ``n * (n - 1) / 2`` node pairs is an edge independently
    with probability ``p``. Pairs are visited in lexicographic order, so
    the graph is a deterministic function of ``(n, p, seed)``.
    """
    _check_probability(p, "p")
    if n < 2:
        raise ValueError(f"`n` must be at least 2. Got: {n}.")
    rng = as_generator(seed)
    rows, cols = np.triu_indices(n, k=1)
    present = rng.random(rows.size) < p
    weights = np.zeros((n, n))
    weights[rows[present], cols[present]] = 1.0
    return validate_gso(weights + weights.T)


def random_weighted_graph(
    n: int,
    p: float,
    seed: int | np.random.Generator,
    low: float = 0.5,
    high: float = 1.5,
) -> GraphShift:
    """Erdős–Rényi support with i.i.d. uniform edge weights."""
    rng = as_generator(seed)
    support = erdos_renyi(n, p, rng).weights
    rows, cols = np.triu_indices(n, k=1)
    draws = rng.uniform(low, high, size=rows.size)
    weights = np.zeros((n, n))
    weights[rows, cols] = draws * support[rows, cols]
    return validate_gso(weights + weights.T)


def anchored_erdos_renyi(
    n: int, p: float, seed: int, *stream: int
) -> tuple[GraphShift, int]:
    """Erdős–Rényi graph whose node 1 is not isolated.

    Seeds ``seed, seed + 1, ...`` are tried in turn, wrapping around at
    ``2**64``. Returns the graph and the seed that produced it.
    """
    for offset in range(MAX_ANCHOR_RETRIES):
        trial_seed = (seed + offset) % SEED_MODULUS
        graph = erdos_renyi(n, p, make_rng(trial_seed, *stream))
        if graph.weights[:, 0].sum() != 0.0:
            return graph, trial_seed
    raise IsolatedAnchorNode(0)


def rewire_count(
    shift: GraphShift, m: int, seed: int | np.random.Generator
) -> GraphShift:
    """Move ``m`` uniformly chosen edges onto uniformly chosen non-edges.

    Removed edges and added positions are drawn without replacement from
    the edge and non-edge sets of the input graph, so they never collide.
    An added edge takes over the weight of the edge it replaces.
    """
    edges, non_edges = _edges_and_non_edges(shift)
    if m < 0 or m > len(edges) or m > len(non_edges):
        raise InsufficientEdges(m, (len(edges), len(non_edges)))
    rng = as_generator(seed)
    removed = rng.choice(len(edges), size=m, replace=False)
    added = rng.choice(len(non_edges), size=m, replace=False)
    weights = np.array(shift.weights)
    for ind_old, ind_new in zip(removed, added, strict=True):
        (i, j), (a, b) = edges[ind_old], non_edges[ind_new]
        weights[a, b] = weights[b, a] = weights[i, j]
        weights[i, j] = weights[j, i] = 0.0
    return validate_gso(weights)


def rewire_prob(
    shift: GraphShift, q: float, seed: int | np.random.Generator
) -> GraphShift:
    """Move every edge with probability ``q`` to a currently absent pair.

    Edges of the input are visited in lexicographic order. A selected edge
    is removed and placed on a pair drawn uniformly from the pairs that
    are absent at that moment, excluding its own position. Replacements
    are applied one after another, so two moved edges never collide.
    """
    _check_probability(q, "q")
    rng = as_generator(seed)
    edges, non_edges = _edges_and_non_edges(shift)
    absent = list(non_edges)
    weights = np.array(shift.weights)
    for i, j in edges:
        if rng.random() >= q or not absent:
            continue
        a, b = absent.pop(int(rng.integers(len(absent))))
        weights[a, b] = weights[b, a] = weights[i, j]
        weights[i, j] = weights[j, i] = 0.0
        absent.append((i, j))
        absent.sort()
    return validate_gso(weights)


def random_filter(L: int, seed: int | np.random.Generator) -> GraphFilter:
    """Filter with ``L`` independent standard normal coefficients."""
    if L < 1:
        raise ValueError(f"`L` must be at least 1. Got: {L}.")
    rng = as_generator(seed)
    return GraphFilter(coefficients=tuple(rng.standard_normal(L)))


def model_covariance(shift: GraphShift, filt: GraphFilter) -> np.ndarray:
    """Covariance ``H H^T`` of white noise diffused by ``H = filt(S)``."""
    filt_matrix = filt.matrix(shift)
    cov = filt_matrix @ filt_matrix.T
    return 0.5 * (cov + cov.T)


def sem_covariance(shift: GraphShift, scale: float = 0.5) -> np.ndarray:
    """Covariance ``(I - a S)^-2`` of a symmetric structural equation model.

    ``a = scale / rho(S)`` keeps ``I - a S`` positive definite for
    ``0 < scale < 1``.
    """
    if not 0.0 < scale < 1.0:
        raise ValueError(f"`scale` must lie in (0, 1). Got: {scale}.")
    radius = _spectral_radius(shift.weights)
    factor = scale / radius if radius > 0 else 0.0
    inv = np.linalg.inv(np.eye(shift.n_nodes) - factor * shift.weights)
    cov = inv @ inv
    return 0.5 * (cov + cov.T)


def precision_covariance(
    shift: GraphShift, shift_eps: float = 1.0
) -> np.ndarray:
    """Covariance of a Gaussian Markov random field with precision
    ``c I - S``, where ``c = lambda_max(S) + shift_eps``."""
    if shift_eps <= 0:
        raise ValueError(f"`shift_eps` must be positive. Got: {shift_eps}.")
    lam_max = float(np.linalg.eigvalsh(shift.weights)[-1])
    precision = (lam_max + shift_eps) * np.eye(shift.n_nodes) - shift.weights
    cov = np.linalg.inv(precision)
    return 0.5 * (cov + cov.T)


def sample_signals(
    cov: np.ndarray, n: int, seed: int | np.random.Generator
) -> np.ndarray:
    """Draw ``n`` zero-mean Gaussian signals with covariance ``cov``.

    Signals are ``C^(1/2) w`` with ``w`` standard normal and ``C^(1/2)``
    the symmetric square root from an eigendecomposition whose negative
    eigenvalues are clamped to zero.
    """
    if n < 1:
        raise ValueError(f"`n` must be at least 1. Got: {n}.")
    rng = as_generator(seed)
    eigvals, eigvecs = scipy.linalg.eigh(cov)
    sqrt_cov = (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.T
    noise = rng.standard_normal((cov.shape[0], n))
    return sqrt_cov @ noise


def sample_covariance(signals: np.ndarray) -> np.ndarray:
    """Sample covariance ``X X^T / n`` of zero-mean signals."""
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    n_samples = signals.shape[1]
    if n_samples < 1:
        raise ValueError("At least one signal is needed.")
    cov = signals @ signals.T / n_samples
    return 0.5 * (cov + cov.T)


def pairwise_distances(signals: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances ``||x_i - x_j||^2`` between node rows."""
    dist = euclidean_distances(np.asarray(signals, dtype=float), squared=True)
    dist = 0.5 * (dist + dist.T)
    np.fill_diagonal(dist, 0.0)
    return dist


def sample_ensemble_signals(
    covariances: CovarianceSet | Sequence[np.ndarray],
    n: int | Sequence[int],
    seeds: Sequence[int | np.random.Generator],
) -> SignalEnsemble:
    """Draw signals for every graph, one seed or generator per graph."""
    matrices = (
        covariances.matrices
        if isinstance(covariances, CovarianceSet)
        else covariances
    )
    counts = [n] * len(matrices) if np.isscalar(n) else list(n)
    return SignalEnsemble(
        tuple(
            sample_signals(cov, count, seed)
            for cov, count, seed in zip(matrices, counts, seeds, strict=True)
        )
    )


def signal_covariances(signals: SignalEnsemble) -> CovarianceSet:
    """Sample covariance of every graph's signals."""
    return CovarianceSet(
        tuple(sample_covariance(x) for x in signals.signals), kind="sample"
    )


def signal_distances(signals: SignalEnsemble) -> list[np.ndarray]:
    """Squared distances between the node rows of every graph's signals."""
    return [pairwise_distances(x) for x in signals.signals]


def signal_subsets(
    signals: np.ndarray,
    k_subsets: int,
    n_per_subset: int,
    seed: int | np.random.Generator,
) -> SignalEnsemble:
    """Split the columns of one signal matrix into disjoint random subsets.

    Raises
    ------
    ValueError
        If fewer than ``k_subsets * n_per_subset`` signals are available.
    """
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    needed = k_subsets * n_per_subset
    if k_subsets < 1 or n_per_subset < 1 or needed > signals.shape[1]:
        raise ValueError(
            f"Cannot draw {k_subsets} subsets of {n_per_subset} signals"
            f" from {signals.shape[1]}. Got: {k_subsets}, {n_per_subset}."
        )
    order = as_generator(seed).permutation(signals.shape[1])[:needed]
    return SignalEnsemble(
        tuple(signals[:, part] for part in order.reshape(k_subsets, -1))
    )


def normalize_ensemble(
    ensemble: GraphEnsemble, per_graph: bool = False
) -> GraphEnsemble:
    """Rescale GSOs so that the first column of graph 1 sums to one.

    With ``per_graph=True`` every graph is divided by its own first-column
    sum instead.
    """
    anchors = [graph.weights[:, 0].sum() for graph in ensemble.graphs]
    if per_graph:
        scales = anchors
    else:
        scales = [anchors[0]] * ensemble.k_graphs
    for k, scale in enumerate(scales):
        if scale == 0.0:
            raise IsolatedAnchorNode(k)
    return ensemble.with_graphs(
        [
            graph.weights / scale
            for graph, scale in zip(ensemble.graphs, scales, strict=True)
        ]
    )


def ensemble_covariances(
    ensemble: GraphEnsemble, filters: Sequence[GraphFilter]
) -> list[np.ndarray]:
    """Model covariance of every graph under its filter."""
    return [
        model_covariance(graph, filt)
        for graph, filt in zip(ensemble.graphs, filters, strict=True)
    ]


def _edges_and_non_edges(
    shift: GraphShift,
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Lexicographically ordered edges and non-edges (``i < j``)."""
    rows, cols = np.triu_indices(shift.n_nodes, k=1)
    present = shift.weights[rows, cols] != 0.0
    pairs = list(zip(rows.tolist(), cols.tolist()))
    edges = [pair for pair, flag in zip(pairs, present) if flag]
    non_edges = [pair for pair, flag in zip(pairs, present) if not flag]
    return edges, non_edges


def _spectral_radius(matrix: np.ndarray) -> float:
    eigvals = np.linalg.eigvalsh(matrix)
    return float(np.max(np.abs(eigvals), initial=0.0))


def _check_probability(value: float, name: str) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"`{name}` must lie in [0, 1]. Got: {value}.")
