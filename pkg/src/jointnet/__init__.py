"""Joint inference of multiple graphs from stationary graph signals."""

__version__ = "0.1.0"

from .certificates.error_bound import RobustBoundReport, theorem2_bound
from .certificates.exact_recovery import CertificateReport, theorem1_check
from .experiment import (
    ExperimentResults,
    TrialRecord,
    recovery_error_fro,
    recovery_error_l1,
    run_bound_experiment,
    run_certificate_experiment,
    run_decay_experiment,
    run_joint_vs_separate,
    run_reference_subsets,
)
from .graphs.graph_generation import (
    erdos_renyi,
    model_covariance,
    random_filter,
    rewire_count,
    rewire_prob,
    sample_covariance,
    sample_signals,
    signal_covariances,
    signal_distances,
)
from .graphs.graph_types import (
    CovarianceSet,
    GraphEnsemble,
    GraphFilter,
    GraphShift,
    SignalEnsemble,
    validate_gso,
)
from .operators.problem import (
    ReducedProblem,
    VectorizedProblem,
    build_Phi,
    build_Psi,
    build_reduced,
)
from .results.load import load_ensemble, load_matrix, load_records
from .results.save import save_ensemble, save_matrix, save_solution
from .solvers.noiseless import solve_noiseless
from .solvers.robust import solve_robust
from .solvers.solver_base import Solution, SolverConfig
from .solvers.solver_factory import (
    choose_epsilon,
    get_solver,
    solve_separate,
)
