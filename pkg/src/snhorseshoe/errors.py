"""Exception hierarchy shared by every module of the package."""


class SaddleNodeError(Exception):
    """Base class for all package errors."""


class DomainError(SaddleNodeError, ValueError):
    """A parameter or point lies outside the domain of an operation."""


class EscapeError(SaddleNodeError):
    """A flow line leaves the core interval before unit time.

    ``escape_time`` is the flow time at which the boundary is reached.
    """

    def __init__(self, message, escape_time):
        super().__init__(message)
        self.escape_time = escape_time


class SingularIntegralError(SaddleNodeError, ValueError):
    """The integrand 1/Y has a pole inside the integration interval."""


class ConstructionError(SaddleNodeError):
    """A built object violates one of its invariants."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class NumericError(SaddleNodeError, ArithmeticError):
    """An iterative numerical routine did not converge."""


class BudgetError(SaddleNodeError):
    """An iteration or size budget was exhausted."""


class ScopeError(SaddleNodeError):
    """An orbit left the piece of the map on which a formula is valid."""


class BasinError(SaddleNodeError):
    """The point lies in the basin of the attracting fixed point."""


class GeometryError(SaddleNodeError):
    """No admissible horseshoe constants exist for the given geometry."""


class NoPreimageError(SaddleNodeError):
    """The point has no preimage inside the rectangle."""


class NoJacobianError(SaddleNodeError):
    """No certified Jacobian is available at this point."""


class WrongParameterError(SaddleNodeError, ValueError):
    """The operation is only defined at a specific parameter value."""


class PreconditionError(SaddleNodeError, ValueError):
    """An input violates the stated precondition of an operation."""


class ConfigError(SaddleNodeError, ValueError):
    """Malformed run configuration."""


class DegenerateGapError(SaddleNodeError):
    """The map is too close to the identity off the fundamental interval."""
