"""Exception hierarchy.

Validation errors (bad input, violated preconditions) and numerical failures
(degenerate Toeplitz systems, nonpositive weights) are kept apart so the CLI
can map them to distinct exit codes.
"""


class SumRuleError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SumRuleError, ValueError):
    """Input violates a documented precondition."""


class NumericalFailure(SumRuleError, ArithmeticError):
    """A computation degenerated numerically."""


class InvalidCoefficient(ValidationError):
    pass


class NonUnitPoint(ValidationError):
    pass


class GridTooCoarse(ValidationError):
    pass


class NyquistViolation(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class BadParameter(ValidationError):
    pass


class EmptySeries(ValidationError):
    pass


class NotDivisible(ValidationError):
    pass


class NotPositiveDefinite(NumericalFailure):
    pass


class NonpositiveWeight(NumericalFailure):
    pass
