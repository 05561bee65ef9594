"""Exception types raised across the package."""

from __future__ import annotations


class LUError(Exception):
    """Base class for every error raised by lucanon."""


class DimensionMismatch(LUError, ValueError):
    pass


class ShapeMismatch(LUError, ValueError):
    pass


class ZeroState(LUError, ValueError):
    pass


class ModeOutOfRange(LUError, IndexError):
    pass


class IndexOutOfRange(LUError, IndexError):
    pass


class WrongCount(LUError, ValueError):
    pass


class NotSorted(LUError, ValueError):
    pass


class PreconditionViolated(LUError, ValueError):
    pass


class SizeGuard(LUError, ValueError):
    """Input too large for an exhaustive routine."""


class NumericalFailure(LUError, ArithmeticError):
    """An iterative routine did not converge within its documented bound."""


class ParseError(LUError, ValueError):
    """A state or witness file could not be parsed.

    ``context`` names the line or JSON field that triggered the failure.
    """

    def __init__(self, message: str, context: str | None = None):
        self.context = context
        if context:
            message = f"{message} ({context})"
        super().__init__(message)
