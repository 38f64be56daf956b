"""Exception types raised by the estimators and the optimizer."""


class FlowfitError(Exception):
    """Base class for all estimation failures."""


class InsufficientDataError(FlowfitError):
    """Too few samples for the requested fit."""


class DegenerateGeometryError(FlowfitError):
    """Data geometry does not determine the model (collinear velocities,
    negative radius argument, flat ground-speed curve)."""


class InsufficientCoverageError(FlowfitError):
    """Heading coverage too small for a method that needs a full revolution."""


class FitQualityError(FlowfitError):
    """Fit succeeded numerically but violates a sanity condition
    (wrong curvature sign, negative current magnitude)."""


class OptimizationFailureError(FlowfitError):
    """No start point converged. Carries per-start diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class ConsensusFailureError(FlowfitError):
    """RANSAC never reached the required inlier fraction."""


class DegenerateParametersError(FlowfitError):
    """Parameter point at which the model is undefined for every sample."""
