from .experiment_base import (
    ExperimentResults,
    TrialRecord,
    absolute_error_l1,
    decay_fit,
    recovery_error_fro,
    recovery_error_l1,
)
from .experiment_factory import (
    experiment_kinds,
    reference_graph,
    run_bound_experiment,
    run_certificate_experiment,
    run_decay_experiment,
    run_joint_vs_separate,
    run_reference_subsets,
    run_trials,
    similar_ensemble,
    synthetic_reference_signals,
)
