from .error_bound import (
    RobustBoundReport,
    omega_constant,
    robust_gamma,
    theorem2_bound,
)
from .exact_recovery import (
    DELTA_GRID,
    CertificateReport,
    gamma_direct,
    support_rank_condition,
    theorem1_check,
)
