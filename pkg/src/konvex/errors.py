"""Exception hierarchy shared by all konvex modules."""


class KonvexError(Exception):
    """Base class for every error raised by konvex."""


class EmptySampleRegion(KonvexError):
    pass


class AnchorOutsideDomain(KonvexError):
    pass


class GridTooCoarse(KonvexError):
    pass


class ChordingToleranceExceeded(KonvexError):
    pass


class MultivaluedDetected(KonvexError):
    pass


class NotMonotone(KonvexError):
    pass


class SingularMatrix(KonvexError):
    pass


class SubgradientUnavailable(KonvexError):
    pass


class NotAffineOnSegment(KonvexError):
    pass


class HessianUnavailable(KonvexError):
    pass


class MinimizationDiverged(KonvexError):
    pass


class BadExponent(KonvexError):
    pass


class PathLeavesDomain(KonvexError):
    pass


class MalformedReport(KonvexError):
    pass


class UsageError(KonvexError):
    """Invalid command-line job; the message names the offending field."""
