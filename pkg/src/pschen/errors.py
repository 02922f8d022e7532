"""Exception types shared across the package."""


class PschenError(Exception):
    """Base class for package errors."""


class DomainError(PschenError):
    """Input outside an operation's mathematical domain or precondition."""


class PrecisionExhaustionError(PschenError):
    """A floor/ceiling decision stayed ambiguous at the maximum working precision."""


class CostError(PschenError):
    """A configured cost cap (term count, table size) would be exceeded."""


class ConvergenceError(PschenError):
    """Adaptive quadrature hit its panel cap before reaching tolerance.

    Carries the partial result so callers can inspect how far it got.
    """

    def __init__(self, message, partial=None, estimate=None):
        super().__init__(message)
        self.partial = partial
        self.estimate = estimate
