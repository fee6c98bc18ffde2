from .noiseless import (
    NoiselessSolver,
    feasible_parametrization,
    solve_noiseless,
)
from .robust import (
    AnchoredGeometry,
    RobustSolver,
    anchored_geometry,
    minimal_epsilon_point,
    restore_feasibility,
    solve_robust,
)
from .solver_base import (
    ADMMSolver,
    Feasibility,
    Solution,
    SolverConfig,
    pattern_multiplier,
    project_ball,
    soft_threshold,
)
from .solver_factory import (
    SolverNotFoundError,
    choose_epsilon,
    combine_solutions,
    get_solver,
    solve_separate,
)
