"""Exception types raised across the package."""

from __future__ import annotations


class AdditerError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(AdditerError, ValueError):
    pass


class NotIrreducible(AdditerError, ValueError):
    pass


class DegreeMismatch(AdditerError, ValueError):
    pass


class ContextMismatch(AdditerError, ValueError):
    pass


class ConstantInput(AdditerError, ValueError):
    pass


class RootAtZero(AdditerError, ValueError):
    pass


class NotAdditive(AdditerError, ValueError):
    pass


class ExceptionalForm(AdditerError, ValueError):
    """Input is aX^(p^h) (+ b); the growth results do not apply."""


class FormulaNotValid(AdditerError, ValueError):
    pass


class NonSquare(AdditerError, ValueError):
    pass


class DimensionMismatch(AdditerError, ValueError):
    pass


class Unsupported(AdditerError):
    """A configured cap was exceeded or the request is outside desk scale."""


class OracleTooLarge(Unsupported):
    pass


class ParseError(AdditerError, ValueError):
    pass


class ZeroDivisor(AdditerError, ZeroDivisionError):
    pass


class ZeroInput(AdditerError, ValueError):
    pass
