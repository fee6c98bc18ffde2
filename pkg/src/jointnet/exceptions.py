"""Exceptions and warnings raised by jointnet."""


class JointNetError(Exception):
    """Base class of all errors raised by jointnet.

    Attributes:
        input_value -- input value which caused the error
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value=None,
        message="An error occurred in jointnet.",
    ) -> None:
        self.input_value = input_value
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        if self.input_value is None:
            return self.message
        return f"{self.message} Got: {self.input_value}."


class GraphStructureError(JointNetError):
    """Exception raised when a matrix violates the structure of a GSO."""


class AsymmetricInput(GraphStructureError):
    """Exception raised when a graph shift operator is not symmetric.

    Attributes:
        input_value -- largest absolute asymmetry found
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        message="Graph shift operator must be symmetric.",
    ) -> None:
        super().__init__(input_value, message)


class NonzeroDiagonal(GraphStructureError):
    """Exception raised when a graph shift operator has self-loops.

    Attributes:
        input_value -- largest absolute diagonal entry found
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        message="Graph shift operator must have a zero diagonal.",
    ) -> None:
        super().__init__(input_value, message)


class InsufficientEdges(GraphStructureError):
    """Exception raised when a graph cannot be rewired as requested.

    Attributes:
        input_value -- requested number of rewired edges
        available -- (number of edges, number of non-edges)
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        available,
        message="Not enough edges or non-edges to rewire.",
    ) -> None:
        self.available = available
        super().__init__(input_value, message)

    def __str__(self):
        return (
            f"{self.message} Edges, non-edges available: {self.available}."
            f" Got: {self.input_value}."
        )


class IsolatedAnchorNode(GraphStructureError):
    """Exception raised when the scale anchor of an ensemble is zero.

    Attributes:
        input_value -- index (0-based) of the graph whose node 1 is isolated
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value=0,
        message="First column of the anchored graph sums to zero.",
    ) -> None:
        super().__init__(input_value, message)


class InfeasibleProblemError(JointNetError):
    """Exception raised when a program or certificate is ill-posed."""


class Infeasible(InfeasibleProblemError):
    """Exception raised when the noiseless constraints have no solution.

    Attributes:
        input_value -- least-squares residual of the equality system
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        message="Noiseless program is infeasible.",
    ) -> None:
        super().__init__(input_value, message)


class InfeasibleEpsilon(InfeasibleProblemError):
    """Exception raised when the robust constraint radius is too small.

    Attributes:
        input_value -- requested epsilon
        minimal_epsilon -- smallest epsilon with a nonempty feasible set
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        minimal_epsilon,
        message="Robust program is infeasible for the given epsilon.",
    ) -> None:
        self.minimal_epsilon = minimal_epsilon
        super().__init__(input_value, message)

    def __str__(self):
        return (
            f"{self.message} Minimal feasible epsilon:"
            f" {self.minimal_epsilon:.17g}. Got: {self.input_value:.17g}."
        )


class InfeasibleGroundTruth(InfeasibleProblemError):
    """Exception raised when a ground truth violates the equality system.

    Attributes:
        input_value -- residual norm of the ground truth
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        message="Ground truth does not satisfy the constraints.",
    ) -> None:
        super().__init__(input_value, message)


class SingularSystem(InfeasibleProblemError):
    """Exception raised when the dual certificate system is singular."""

    def __init__(
        self,
        input_value=None,
        message=(
            "Kernels of the off-support analysis rows and of the constraint"
            " matrix intersect nontrivially."
        ),
    ) -> None:
        super().__init__(input_value, message)


class RankDeficientM(InfeasibleProblemError):
    """Exception raised when the commutator matrix M is rank deficient.

    Attributes:
        input_value -- ratio of smallest to largest singular value
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        message="Matrix M is not full column rank; bound undefined.",
    ) -> None:
        super().__init__(input_value, message)


class EmptySupport(InfeasibleProblemError):
    """Exception raised when the ground truth has no support under R.

    Attributes:
        input_value -- largest absolute entry of ``R s*_L``
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        message="Ground truth has an empty support; bound undefined.",
    ) -> None:
        super().__init__(input_value, message)


class MaxItersExceeded(JointNetError):
    """Exception raised when a solver stops at its iteration limit.

    Attributes:
        input_value -- number of iterations run
        solution -- best iterate found
        message -- explanation of the error
    """

    def __init__(
        self,
        input_value,
        solution=None,
        message="Solver reached the maximum number of iterations.",
    ) -> None:
        self.solution = solution
        super().__init__(input_value, message)


class DataFileError(JointNetError):
    """Exception raised when an input file cannot be read or parsed."""


class ConfigError(JointNetError):
    """Exception raised when a run configuration is invalid."""


class ConvergenceWarning(UserWarning):
    """Warning issued when a solver returns an unconverged iterate."""


class AnchorWarning(UserWarning):
    """Warning issued when an ensemble cannot be scale-normalized."""


class BoundWarning(UserWarning):
    """Warning issued when an observed error exceeds the robust bound."""
