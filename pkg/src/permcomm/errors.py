"""Exception types raised across the package.

The CLI prints ``TypeName: message`` for any :class:`PermcommError`, so the
class names double as the user-facing error vocabulary.
"""


class PermcommError(Exception):
    """Base class for all domain errors."""


# permutations
class CycleSyntaxError(PermcommError, ValueError):
    pass


class PointOutOfRange(PermcommError, ValueError):
    pass


class RepeatedPointInCycle(PermcommError, ValueError):
    pass


class DegreeMismatch(PermcommError, ValueError):
    pass


class LengthMismatch(PermcommError, ValueError):
    pass


# group analysis
class InvalidWindow(PermcommError, ValueError):
    pass


class NotTransitive(PermcommError):
    pass


class PreconditionViolated(PermcommError):
    pass


class OrderCapExceeded(PermcommError):
    pass


# decomposition pipeline
class NotEvenPermutation(PermcommError, ValueError):
    pass


class SearchExhausted(PermcommError):
    pass


class InsufficientSupport(PermcommError):
    pass


class UnsupportedDegree(PermcommError):
    pass


# counting
class InvalidMinPart(PermcommError, ValueError):
    pass


class ParityContradiction(PermcommError, ArithmeticError):
    pass


class InvalidRatio(PermcommError, ValueError):
    pass


class OutOfStatedRange(PermcommError, ValueError):
    pass


# T2 census
class SearchBudgetExceeded(PermcommError):
    pass


class Refused(PermcommError):
    pass
