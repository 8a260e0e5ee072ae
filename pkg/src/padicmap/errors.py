"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PadicMapError(Exception):
    """Base class for every error raised by :mod:`padicmap`."""


class InvalidPrime(PadicMapError, ValueError):
    def __init__(self, p):
        super().__init__(f"p must be an odd prime (got {p!r})")
        self.p = p


class InvalidInput(PadicMapError, ValueError):
    pass


class PrecisionExhausted(PadicMapError, ArithmeticError):
    """Raised when cancellation leaves no certified digit.

    ``lower_bound`` is the valuation the true result is known to reach
    (the absolute precision at which every digit cancelled), when known.
    ``step`` is filled in by orbit-style loops.
    """

    def __init__(self, message="no certified digits left", lower_bound=None, step=None):
        super().__init__(message)
        self.lower_bound = lower_bound
        self.step = step


class NotASquare(PadicMapError, ValueError):
    pass


class WrongRegime(PadicMapError, ValueError):
    def __init__(self, expected, got):
        if not isinstance(expected, (list, tuple, set, frozenset)):
            expected = [expected]
        names = ", ".join(sorted(str(e) for e in expected))
        super().__init__(f"operation requires regime {names}; parameters are {got}")
        self.expected = expected
        self.got = got


class PoleTooClose(PadicMapError, ValueError):
    pass


class Unsupported(PadicMapError, ValueError):
    pass


class WellDefinednessViolation(PadicMapError, RuntimeError):
    def __init__(self, ball, witnesses):
        super().__init__(f"induced map is not well defined on {ball}: {witnesses}")
        self.ball = ball
        self.witnesses = witnesses


class NonConvergence(PadicMapError, RuntimeError):
    pass
