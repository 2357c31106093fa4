"""Exception types shared across the package."""


class PqdecError(Exception):
    """Base class for all library errors."""


class NotPrime(PqdecError):
    pass


class Reducible(PqdecError):
    pass


class DegreeMismatch(PqdecError):
    pass


class FieldMismatch(PqdecError):
    pass


class DivisionByZero(PqdecError, ZeroDivisionError):
    pass


class OutOfRange(PqdecError):
    pass


class LengthMismatch(PqdecError):
    pass


class BadShape(PqdecError):
    pass


class BudgetExceeded(PqdecError):
    pass


class BadRegister(PqdecError):
    pass


class ScaleExceeded(PqdecError):
    pass


class OrthogonalityViolated(PqdecError):
    pass


class RetryBudgetExhausted(PqdecError):
    pass


class PromiseViolated(PqdecError):
    """Decoder output failed verification, or a decoder precondition is unmet.

    Raised instead of silently returning a wrong answer.
    """


class NoSigmaSucceeded(PqdecError):
    pass


class PreconditionUnmet(PqdecError):
    pass


class BadParams(PqdecError):
    pass


class GadgetGapError(PqdecError):
    """A gadget distance bound failed; indicates a construction bug."""
