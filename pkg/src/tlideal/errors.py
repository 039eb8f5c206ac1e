"""Exception hierarchy shared by every module of the package."""
from __future__ import annotations


class TLError(Exception):
    """Base class for all errors raised by tlideal."""


class DivisionByZero(TLError, ZeroDivisionError):
    pass


class BadParameter(TLError, ValueError):
    pass


class NotEvaluable(TLError, ArithmeticError):
    """A scalar (or a coefficient of a morphism) has a pole at the chosen root of unity."""

    def __init__(self, message: str, diagram=None):
        super().__init__(message)
        self.diagram = diagram


class DomainMismatch(TLError, ValueError):
    pass


class RingMismatch(TLError, TypeError):
    pass


class ParityError(TLError, ValueError):
    pass


class PreconditionFailed(TLError, ValueError):
    pass


class NotMinimal(TLError, ArithmeticError):
    pass


class CriticalDiagram(TLError, ValueError):
    pass


class NoPartner(TLError, ValueError):
    pass


class NotStabilized(TLError, RuntimeError):
    pass


class VerificationFailed(TLError, AssertionError):
    """A verification sweep found a counterexample; ``counterexample`` carries it."""

    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
