"""Shared fixtures: small ensembles with exactly known covariances."""
import numpy as np
import pytest

from jointnet.experiment.experiment_factory import (
    similar_ensemble,
    trial_covariances,
    trial_sample_covariances,
)
from jointnet.graphs import (
    CovarianceSet,
    GraphEnsemble,
    normalize_ensemble,
    random_weighted_graph,
    sem_covariance,
)
from jointnet.operators import build_Psi
from jointnet.rng import Experiment, make_rng


def weighted_instance(seed: int, n_nodes: int = 6, k_graphs: int = 1):
    """Complete graphs with random weights, each anchored to itself.

    Generic weights give simple spectra, so the feasible set of the
    noiseless program reduces to the ground truth.
    """
    graphs = tuple(
        random_weighted_graph(n_nodes, 1.0, make_rng(seed, k))
        for k in range(k_graphs)
    )
    truth = normalize_ensemble(GraphEnsemble(graphs=graphs), per_graph=True)
    covs = CovarianceSet(
        tuple(sem_covariance(graph) for graph in truth.graphs)
    )
    return truth, covs


@pytest.fixture
def weighted_single():
    return weighted_instance(11)


@pytest.fixture
def rewired_pair():
    """Unweighted graph and one rewired copy with filter covariances."""
    truth = similar_ensemble(
        6, 2, 0.5, 3, Experiment.CERTIFICATE, 0, rewires=1
    )
    model = trial_covariances(truth, 3, 3, Experiment.CERTIFICATE, 0)
    return truth, model


@pytest.fixture
def sampled_pair():
    """Two similar graphs with sample covariances of 200 signals each."""
    truth = similar_ensemble(5, 2, 0.5, 7, Experiment.DECAY, 0, q=0.3)
    model = trial_covariances(truth, 3, 7, Experiment.DECAY, 0)
    sample = trial_sample_covariances(model, 200, 7, Experiment.DECAY, 0)
    psi = build_Psi(truth.alpha, truth.beta, 2, 5)
    return truth, model, sample, psi


@pytest.fixture
def identity_covariance():
    """Single graph on four nodes whose covariance commutes with all."""
    return CovarianceSet((np.eye(4),))
