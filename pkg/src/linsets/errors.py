"""Exception hierarchy shared by every module."""


class LinsetsError(Exception):
    """Base class for all library errors."""


class NotPrime(LinsetsError, ValueError):
    pass


class ReduciblePolynomial(LinsetsError, ValueError):
    pass


class BadParams(LinsetsError, ValueError):
    pass


class CtxMismatch(LinsetsError, ValueError):
    pass


class DivisionByZero(LinsetsError, ZeroDivisionError):
    pass


class MixedAmbient(LinsetsError, ValueError):
    pass


class ZeroScalar(LinsetsError, ValueError):
    pass


class BadIntersection(BadParams):
    """The complement condition S̄ ∩ b·F_{q^t} = {0} fails."""


class NotSubfieldLinear(BadParams):
    pass


class NotScattered(BadParams):
    pass


class NotAGenerator(BadParams):
    pass


class InseparableDefect(LinsetsError, ArithmeticError):
    pass


class MuInBaseField(BadParams):
    pass


class DimOrder(BadParams):
    pass


class BadDims(BadParams):
    pass


class DimMismatch(BadParams):
    pass


class HypothesisViolation(BadParams):
    pass


class TooLarge(LinsetsError):
    """A guard refused an enumeration that exceeds its candidate ceiling."""


class InternalContradiction(LinsetsError, AssertionError):
    """A computed object contradicts a theorem that should hold for it.

    Never expected; raised so that a falsification cannot pass silently.
    """
