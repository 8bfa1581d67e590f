"""Exception hierarchy shared across the package."""


class BetaEdgeError(Exception):
    """Base class for all package errors."""


class Inadmissible(BetaEdgeError):
    """Ensemble or scaling parameters outside the admissible range."""


class ZeroPivot(BetaEdgeError):
    """Recurrence pivot (N - p) * E_p vanished; parameters inadmissible."""


class StageOverflow(BetaEdgeError):
    """Attempt to step the recurrence beyond p = N."""


class IndexOutOfRange(BetaEdgeError):
    """Elementary symmetric polynomial index outside [0, len(values)]."""


class PoleHit(BetaEdgeError):
    """A gamma argument landed on a nonpositive integer."""


class NegativePolyValue(BetaEdgeError):
    """The recurrence polynomial evaluated nonpositive on the grid."""


class OutOfSupport(BetaEdgeError):
    """A grid point unscaled to a coordinate outside the weight's support."""


class ZeroK(BetaEdgeError):
    """The derivative-comparison constant k#(beta) is zero for this case."""


class GridMismatch(BetaEdgeError):
    """Two density tables do not share the same scaled grid."""


class DegenerateFit(BetaEdgeError):
    """Rate fit input is degenerate (repeated N or nonpositive deviations)."""


class BetaUnsupported(BetaEdgeError):
    """Operation only defined at beta = 2."""


class TooLarge(BetaEdgeError):
    """Brute-force oracle requested beyond its feasible size."""


class RangeExceeded(BetaEdgeError):
    """Airy evaluation requested outside the documented |x| <= 40 range."""


class EmptyWindow(BetaEdgeError):
    """No eigenvalues fell inside the requested histogram window."""
