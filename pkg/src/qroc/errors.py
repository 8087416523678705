"""Exception hierarchy.

Validation problems derive from :class:`ValidationError` (also a
``ValueError``) so callers that only care about bad input can catch one type.
"""


class QrocError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QrocError, ValueError):
    pass


class NonHermitian(ValidationError):
    pass


class NotPositive(ValidationError):
    pass


class BadTrace(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class RankOutOfRange(ValidationError):
    pass


class CompletenessError(ValidationError):
    """Kraus operators do not sum to the identity."""


class BlochVectorTooLong(ValidationError):
    pass


class DegenerateDistribution(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class TangentUndefined(ValidationError):
    pass


class EffectSumExceedsIdentity(ValidationError):
    pass


class InfeasiblePair(QrocError):
    """The two states cannot be discriminated unambiguously."""


class SingularState(QrocError):
    pass


class NoConvergence(QrocError):
    pass
