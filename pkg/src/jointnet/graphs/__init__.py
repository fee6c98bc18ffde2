from .graph_generation import (
    anchored_erdos_renyi,
    ensemble_covariances,
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
)
from .graph_types import (
    CovarianceSet,
    GraphEnsemble,
    GraphFilter,
    GraphShift,
    SignalEnsemble,
    beta_pairs,
    beta_preset,
    validate_gso,
)
