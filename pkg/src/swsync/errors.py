"""Exception hierarchy for swsync.

Every domain error raised by the library derives from :class:`SwsyncError`,
so callers (in particular the CLI) can distinguish domain failures from
programming errors.
"""


class SwsyncError(Exception):
    """Base class for all swsync domain errors."""


class ParameterError(SwsyncError, ValueError):
    """Invalid model or generator parameters (e.g. N <= 2k, p > 1)."""


class EdgeListFormatError(SwsyncError):
    """Malformed edge-list file; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SpectralError(SwsyncError):
    """Spectral computation cannot proceed (empty graph, asymmetric input)."""


class FitError(SwsyncError):
    """Moment triple not representable by a triangular density."""


class CubicComplexRootsError(SwsyncError):
    """Cubic has a complex conjugate root pair beyond tolerance."""


class IntegrationError(SwsyncError):
    """Trajectory or fundamental matrix left the finite range."""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} (t={time:g})")
        self.time = time


class LimitCycleError(SwsyncError):
    """Periodic orbit detection failed (no returns, or period not settling)."""


class StabilityIntervalError(SwsyncError):
    """Coarse exponent sweep has no usable sign structure."""


class PredictionError(SwsyncError):
    """Prediction pipeline produced an unusable support estimate."""
