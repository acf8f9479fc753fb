"""Exception types shared across the package."""


class SdcError(Exception):
    """Base class for all errors raised by sdcert."""


class EdgeListParseError(SdcError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphValidationError(SdcError, ValueError):
    pass


class DisconnectedGraphError(SdcError):
    pass


class BudgetExceededError(SdcError, ValueError):
    """An exact routine was asked to run above its configured size cap."""


class UndefinedConductanceError(SdcError, ValueError):
    """Conductance requested for the empty set or the whole vertex set."""


class SweepHypothesisError(SdcError, ValueError):
    """The ball around the sweep centre already holds more than half the volume."""


class InvariantViolation(SdcError, AssertionError):
    """A mathematically guaranteed property failed; this indicates a bug."""


class TrivialRegime(SdcError):
    """Diameter too small relative to k for landmarks/balls to exist."""


class EigensolverError(SdcError):
    def __init__(self, message: str, residuals=None, iterations: int = 0):
        super().__init__(message)
        self.residuals = residuals
        self.iterations = iterations
