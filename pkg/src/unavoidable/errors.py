"""Exception hierarchy shared by the library and the CLI."""


class UnavoidableError(Exception):
    """Base class for every error raised on purpose by this package."""


class ParseError(UnavoidableError, ValueError):
    """Malformed text document. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VertexRangeError(UnavoidableError, IndexError):
    pass


class PreconditionError(UnavoidableError, ValueError):
    """Arguments out of range or a stated precondition fails."""


class HypothesisViolated(PreconditionError):
    """The input does not satisfy a theorem's hypothesis (e.g. color density below epsilon)."""


class BudgetExceeded(UnavoidableError):
    """An exact oracle was asked to run above its instance-size budget."""


class CertificateViolation(UnavoidableError, AssertionError):
    """A proven bound failed on a concrete run. Always a bug, never an input problem."""
