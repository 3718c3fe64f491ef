"""Exception types raised across the package."""


class NormalizationError(ValueError):
    """A state that must be normalized is not."""


class InconsistentMonotonesError(ValueError):
    """A set of concurrence monotones does not come from any valid spectrum."""


class NumericalError(ArithmeticError):
    """A computation produced non-finite values or failed to converge."""
