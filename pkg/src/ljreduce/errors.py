"""Exception types raised by the engine.

Failed structural checks carry a witness (the offending basis pair and its
residual) so a rejection is never silent.
"""


class LJError(Exception):
    """Base class for all engine errors."""


class DimensionMismatchError(LJError):
    pass


class HermiticityError(LJError):
    pass


class AmbientMismatchError(LJError):
    pass


class MembershipError(LJError):
    """A matrix or subspace is not contained where a precondition requires."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ParameterError(LJError):
    """Structure parameters violate kappa > 0 or kappa * lambda^2 = 1/4."""


class ClosureError(LJError):
    """A carrier fails to close under the required products."""

    def __init__(self, message, witness=None, residual=None):
        super().__init__(message)
        self.witness = witness
        self.residual = residual


class NotAnIdealError(LJError):
    def __init__(self, message, witness=None, residual=None):
        super().__init__(message)
        self.witness = witness
        self.residual = residual


class NotASubalgebraError(LJError):
    def __init__(self, message, witness=None, residual=None):
        super().__init__(message)
        self.witness = witness
        self.residual = residual


class UnitalSubalgebraError(LJError):
    """Reduction by a subalgebra containing the global Jordan unit is refused."""


class StateError(LJError):
    """A functional fails positivity or normalization where a state is required."""


class PreconditionError(LJError):
    pass


class ConvergenceError(LJError):
    def __init__(self, message, iterations=None, residuals=None):
        super().__init__(message)
        self.iterations = iterations
        self.residuals = residuals


class TheoremViolationError(LJError):
    """A certified structural identity failed numerically.

    This should never fire on valid input; it indicates a tolerance
    misconfiguration rather than bad data.
    """


class SpecFormatError(LJError):
    """A problem-specification file could not be parsed or validated."""
