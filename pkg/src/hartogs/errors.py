"""Exception hierarchy shared by every module."""


class HartogsError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(HartogsError, ValueError):
    """An argument lies outside the set where the operation is defined."""


class ConditionError(DomainError):
    """A validity inequality failed.

    ``condition`` names the inequality that did not hold.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class RangeError(DomainError):
    """A Lebesgue exponent lies outside the interval where a result applies."""


class SingularityError(DomainError):
    """A kernel expression was evaluated on its singular set."""


class AccuracyError(HartogsError, ArithmeticError):
    """Quadrature refinement ran out of budget before meeting its tolerance."""

    def __init__(self, message, best_estimate=None, abs_error=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.abs_error = abs_error
