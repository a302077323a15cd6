class NlgamesError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(NlgamesError, ValueError):
    pass


class NotHermitianError(NlgamesError, ValueError):
    pass


class NotObservableError(NlgamesError, ValueError):
    """Raised when an operator does not square to the identity."""


class ShapeMismatchError(NlgamesError, ValueError):
    pass


class InvalidDistributionError(NlgamesError, ValueError):
    pass


class BudgetExceededError(NlgamesError):
    """Enumeration or LP size exceeds the configured budget."""


class InfeasibleError(NlgamesError):
    pass


class InvariantViolation(NlgamesError, AssertionError):
    pass
