"""Exception hierarchy for the lpvi package.

Every error raised on purpose by this package derives from LpviError, so
callers can catch one base class at API boundaries. The CLI maps subclasses
to distinct exit codes.
"""


class LpviError(Exception):
    """Base class for all lpvi errors."""


class InvalidInputError(LpviError):
    """An argument is structurally valid but outside the admissible range."""


class ShapeError(LpviError):
    """Dimension mismatch between vectors, matrices, sets or spaces."""


class UnsupportedSpaceError(LpviError):
    """The exponent p does not define a supported space (need 1 < p < inf)."""


class UnsupportedRetractionError(LpviError):
    """No closed-form sunny nonexpansive retraction for this set/exponent pair."""


class UnsupportedOracleError(LpviError):
    """The brute-force oracle cannot handle this problem (unbounded set, dim > 3)."""


class EvaluationError(LpviError):
    """A mapping evaluator failed or produced non-finite output."""


class EstimationError(LpviError):
    """A sampling-based estimate could not be formed (no usable sample pairs)."""


class ConfigError(LpviError):
    """Problem configuration is malformed or inconsistent."""


class ResourceError(LpviError):
    """The request exceeds a hard resource cap (for example grid size)."""


class DivergenceError(LpviError):
    """The fixed-point iteration produced a non-finite iterate.

    Carries the trace rows accumulated up to the failure so callers can
    inspect how the run blew up.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []
