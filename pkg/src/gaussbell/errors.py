"""Exception types shared across the package.

The CLI maps these onto exit codes: invalid input -> 1, accuracy -> 2.
"""


class GaussBellError(Exception):
    """Base class for all package errors."""


class InvalidInputError(GaussBellError, ValueError):
    """A parameter violates a documented precondition (non-finite, out of
    range, missing required option, ...)."""


class NumericalDomainError(GaussBellError, ArithmeticError):
    """The input is formally valid but numerically unusable (singular
    covariance, unphysical partial-transpose spectrum, ...)."""


class AccuracyError(GaussBellError, RuntimeError):
    """A requested tolerance could not be certified.

    Carries the best available error estimate in ``estimate`` so callers
    can decide whether the value is still usable.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
