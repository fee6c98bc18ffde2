import numpy as np
import pytest

from jointnet.exceptions import (
    AsymmetricInput,
    InsufficientEdges,
    IsolatedAnchorNode,
    NonzeroDiagonal,
)
from jointnet.graphs import (
    CovarianceSet,
    GraphEnsemble,
    GraphFilter,
    SignalEnsemble,
    anchored_erdos_renyi,
    beta_preset,
    erdos_renyi,
    model_covariance,
    normalize_ensemble,
    pairwise_distances,
    precision_covariance,
    random_filter,
    random_weighted_graph,
    rewire_count,
    rewire_prob,
    sample_covariance,
    sample_ensemble_signals,
    sample_signals,
    sem_covariance,
    signal_covariances,
    signal_distances,
    signal_subsets,
    validate_gso,
)
from jointnet.rng import SEED_MODULUS, make_rng


def test_validate_gso_rejects_asymmetry():
    matrix = np.array([[0.0, 1.0], [0.5, 0.0]])
    with pytest.raises(AsymmetricInput):
        validate_gso(matrix)


def test_validate_gso_rejects_self_loops():
    matrix = np.array([[1.0, 1.0], [1.0, 0.0]])
    with pytest.raises(NonzeroDiagonal):
        validate_gso(matrix)


def test_validate_gso_cleans_tiny_asymmetry():
    matrix = np.array([[0.0, 1.0], [1.0 + 1e-12, 0.0]])
    shift = validate_gso(matrix)
    assert np.array_equal(shift.weights, shift.weights.T)
    assert not shift.weights.flags.writeable
    assert shift.n_edges == 1
    assert shift.edges == [(0, 1)]


def test_erdos_renyi_is_deterministic():
    first = erdos_renyi(12, 0.3, make_rng(5))
    second = erdos_renyi(12, 0.3, make_rng(5))
    other = erdos_renyi(12, 0.3, make_rng(6))
    assert first == second
    assert first != other


def test_erdos_renyi_extremes():
    assert erdos_renyi(7, 0.0, 1).n_edges == 0
    assert erdos_renyi(7, 1.0, 1).n_edges == 21


def test_erdos_renyi_rejects_bad_probability():
    with pytest.raises(ValueError, match="Got"):
        erdos_renyi(5, 1.5, 0)


def test_random_weighted_graph_range():
    graph = random_weighted_graph(8, 1.0, 3, low=0.5, high=1.5)
    upper = graph.weights[np.triu_indices(8, k=1)]
    assert np.all((upper >= 0.5) & (upper < 1.5))


def test_anchored_erdos_renyi_has_connected_anchor():
    graph, seed_used = anchored_erdos_renyi(10, 0.1, 4)
    assert graph.weights[:, 0].sum() > 0
    assert seed_used >= 4


def test_anchored_erdos_renyi_fails_without_edges():
    with pytest.raises(IsolatedAnchorNode):
        anchored_erdos_renyi(5, 0.0, 0)


def test_rewire_count_moves_exact_number_of_edges():
    graph = erdos_renyi(15, 0.3, 2)
    copy = rewire_count(graph, 4, 9)
    assert copy.n_edges == graph.n_edges
    removed = set(graph.edges) - set(copy.edges)
    added = set(copy.edges) - set(graph.edges)
    assert len(removed) == len(added) == 4


def test_rewire_count_keeps_weights():
    graph = random_weighted_graph(10, 0.4, 1)
    copy = rewire_count(graph, 3, 2)
    original = np.sort(graph.weights[np.triu_indices(10, k=1)])
    moved = np.sort(copy.weights[np.triu_indices(10, k=1)])
    assert np.array_equal(original, moved)


def test_rewire_count_insufficient_edges():
    graph = erdos_renyi(5, 1.0, 0)
    with pytest.raises(InsufficientEdges, match="Got: 1"):
        rewire_count(graph, 1, 0)


def test_rewire_prob_extremes():
    graph = erdos_renyi(12, 0.3, 8)
    assert rewire_prob(graph, 0.0, 1) == graph
    moved = rewire_prob(graph, 1.0, 1)
    assert moved.n_edges == graph.n_edges


def test_filter_matrix_matches_polynomial():
    graph = random_weighted_graph(5, 0.8, 0)
    filt = GraphFilter((0.5, -1.0, 2.0))
    weights = graph.weights
    expected = 0.5 * np.eye(5) - weights + 2.0 * weights @ weights
    np.testing.assert_allclose(filt.matrix(graph), expected, atol=1e-12)


@pytest.mark.parametrize(
    "covariance",
    [
        lambda g: model_covariance(g, random_filter(3, 4)),
        sem_covariance,
        precision_covariance,
    ],
)
def test_covariances_commute_with_shift(covariance):
    graph = random_weighted_graph(8, 0.5, 12)
    cov = covariance(graph)
    commutator = cov @ graph.weights - graph.weights @ cov
    assert np.linalg.norm(commutator) < 1e-9 * max(1.0, np.linalg.norm(cov))
    assert np.linalg.eigvalsh(cov).min() > -1e-10


def test_sample_covariance_converges():
    graph = random_weighted_graph(6, 0.6, 3)
    cov = sem_covariance(graph)
    signals = sample_signals(cov, 20_000, make_rng(1))
    assert signals.shape == (6, 20_000)
    estimate = sample_covariance(signals)
    assert np.abs(estimate - cov).max() < 0.1 * np.abs(cov).max()


def test_pairwise_distances():
    signals = np.array([[0.0, 0.0], [3.0, 4.0], [1.0, 0.0]])
    dist = pairwise_distances(signals)
    assert dist[0, 1] == pytest.approx(25.0)
    assert dist[0, 2] == pytest.approx(1.0)
    assert np.all(np.diag(dist) == 0.0)


def test_normalize_ensemble_modes():
    first = random_weighted_graph(6, 1.0, 0)
    second = random_weighted_graph(6, 1.0, 1)
    ensemble = GraphEnsemble(graphs=(first, second))
    joint = normalize_ensemble(ensemble)
    assert joint.matrices[0][:, 0].sum() == pytest.approx(1.0)
    ratio = first.weights[:, 0].sum()
    np.testing.assert_allclose(joint.matrices[1] * ratio, second.weights)
    each = normalize_ensemble(ensemble, per_graph=True)
    for matrix in each.matrices:
        assert matrix[:, 0].sum() == pytest.approx(1.0)


def test_normalize_ensemble_isolated_anchor():
    ensemble = GraphEnsemble.from_matrices([np.zeros((4, 4))])
    with pytest.raises(IsolatedAnchorNode):
        normalize_ensemble(ensemble)


def test_ensemble_weights():
    graphs = [random_weighted_graph(4, 1.0, k).weights for k in range(3)]
    ensemble = GraphEnsemble.from_matrices(graphs, beta="path")
    assert ensemble.beta == {(0, 1): 1.0, (1, 2): 1.0}
    assert np.array_equal(ensemble.beta_vector(), [1.0, 0.0, 1.0])
    assert np.array_equal(ensemble.alpha, np.ones(3))
    assert beta_preset(3, "complete", 2.0) == {
        (0, 1): 2.0,
        (0, 2): 2.0,
        (1, 2): 2.0,
    }
    with pytest.raises(ValueError):
        GraphEnsemble.from_matrices(graphs, beta={(1, 0): 1.0})
    with pytest.raises(ValueError):
        GraphEnsemble.from_matrices(graphs, alpha=[1.0, 0.0, 1.0])


def test_covariance_set_rejects_asymmetric():
    with pytest.raises(ValueError, match="symmetric"):
        CovarianceSet((np.array([[1.0, 0.5], [0.0, 1.0]]),))


def test_erdos_renyi_mean_edge_count():
    counts = [erdos_renyi(20, 0.3, seed).n_edges for seed in range(200)]
    assert np.mean(counts) == pytest.approx(57.0, abs=2.0)


def test_rewire_prob_moves_expected_fraction():
    fractions = []
    for seed in range(200):
        graph = erdos_renyi(40, 0.1, seed)
        moved = rewire_prob(graph, 0.3, make_rng(seed, 1))
        assert moved.n_edges == graph.n_edges
        missing = set(graph.edges) - set(moved.edges)
        fractions.append(len(missing) / graph.n_edges)
    assert np.mean(fractions) == pytest.approx(0.3, abs=0.03)


def test_rewire_prob_always_moves_single_edge():
    weights = np.zeros((3, 3))
    weights[0, 1] = weights[1, 0] = 1.0
    graph = validate_gso(weights)
    for seed in range(20):
        moved = rewire_prob(graph, 1.0, seed)
        assert moved.n_edges == 1
        assert moved.weights[0, 1] == 0.0


def test_random_filter_coefficients_are_standard_normal():
    draws = np.array(
        [random_filter(3, seed).coefficients for seed in range(2000)]
    )
    assert draws.shape == (2000, 3)
    assert np.abs(draws.mean(axis=0)).max() < 0.1
    assert np.abs(draws.std(axis=0) - 1.0).max() < 0.1


def test_sample_covariance_of_white_signals():
    signals = sample_signals(np.eye(4), 100_000, make_rng(5))
    estimate = sample_covariance(signals)
    assert np.abs(estimate - np.eye(4)).max() < 0.02


def test_anchored_erdos_renyi_wraps_seed():
    graph, seed_used = anchored_erdos_renyi(2, 0.05, SEED_MODULUS - 1)
    assert 0 <= seed_used < SEED_MODULUS
    assert graph.n_edges == 1
    if seed_used != SEED_MODULUS - 1:
        assert (graph, seed_used) == anchored_erdos_renyi(2, 0.05, 0)
    with pytest.raises(ValueError, match="64-bit"):
        make_rng(SEED_MODULUS)


def test_sample_ensemble_signals():
    covariances = CovarianceSet((np.eye(3), 2.0 * np.eye(3)))
    signals = sample_ensemble_signals(
        covariances, [10, 20], [make_rng(0), make_rng(1)]
    )
    assert signals.n_nodes == 3
    assert signals.n_samples == [10, 20]
    assert signals.n_total == 30
    expected = sample_signals(np.eye(3), 10, make_rng(0))
    np.testing.assert_array_equal(signals.signals[0], expected)
    same = sample_ensemble_signals(list(covariances.matrices), 5, [3, 4])
    assert same.n_samples == [5, 5]


def test_signal_ensemble_rejects_mismatched_rows():
    with pytest.raises(ValueError, match="same number of rows"):
        SignalEnsemble((np.ones((3, 4)), np.ones((2, 4))))


def test_signal_covariances_and_distances():
    rng = make_rng(2)
    signals = SignalEnsemble(
        (rng.standard_normal((4, 30)), rng.standard_normal((4, 12)))
    )
    covariances = signal_covariances(signals)
    assert covariances.kind == "sample"
    distances = signal_distances(signals)
    for x, cov, dist in zip(
        signals.signals, covariances.matrices, distances, strict=True
    ):
        np.testing.assert_allclose(cov, sample_covariance(x))
        np.testing.assert_allclose(dist, pairwise_distances(x))


def test_signal_subsets_are_disjoint():
    signals = np.arange(60, dtype=float).reshape(2, 30)
    subsets = signal_subsets(signals, 3, 5, 7)
    assert subsets.n_samples == [5, 5, 5]
    first_rows = np.concatenate([x[0] for x in subsets.signals])
    assert np.unique(first_rows).size == 15
    for x in subsets.signals:
        np.testing.assert_array_equal(x[1], x[0] + 30.0)
    with pytest.raises(ValueError, match="Got: 3, 11"):
        signal_subsets(signals, 3, 11, 7)
