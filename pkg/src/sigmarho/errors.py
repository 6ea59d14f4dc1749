"""Exception hierarchy shared across the package."""


class SigmaRhoError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SigmaRhoError):
    """Malformed input text. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceededError(SigmaRhoError):
    """An exhaustive oracle was asked to enumerate beyond its configured cap."""


class UnsupportedSpecError(SigmaRhoError):
    """The (sigma, rho) pair has a shape the requested operation does not handle."""


class GuardViolationError(SigmaRhoError):
    """The offset-disjointness condition for the modulator kernel fails."""


class InterpolationError(SigmaRhoError):
    """Interpolation nodes overlap or are empty."""


class LiftInconsistencyError(SigmaRhoError):
    """A satisfying kernel assignment did not extend to a dominating set."""


class DisconnectedGraphError(SigmaRhoError):
    """The operation requires a connected input graph."""


class DecompositionError(SigmaRhoError):
    """A modular decomposition tree is malformed or does not match its graph."""
