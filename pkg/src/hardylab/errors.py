"""Exception types shared across the package."""


class HardyLabError(Exception):
    """Base class for all package errors."""


class FormatError(HardyLabError):
    """Malformed input data (bad JSON shape, too few vertices, bad spec string)."""


class ConstructionError(HardyLabError):
    """Geometric construction is invalid (self-intersecting chain, basepoint outside)."""


class PositionError(HardyLabError):
    """Query point is outside the domain or on its boundary."""


class AmbiguousPositionError(PositionError):
    """Query point is too close to the boundary to classify reliably."""


class DomainError(HardyLabError):
    """Argument outside the mathematical domain of an operation (|z| >= 1, r out of range)."""


class ResolutionError(HardyLabError):
    """Discretization too coarse for the requested computation (disconnected graph)."""


class FitError(HardyLabError):
    """Conformal fit failed or failed its own diagnostics."""


class ConvergenceError(HardyLabError):
    """Iterative solver did not reach its tolerance within the iteration budget."""
