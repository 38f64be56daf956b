"""Batch estimation of a steady, uniform flow-field from ground-velocity
and heading logs recorded during heading-change maneuvers.

Four estimators over the same velocity-triangle kinematics:

- :mod:`flowfit.circlefit` -- closed-form circle fit to (xdot, ydot)
- :mod:`flowfit.quadfit` -- windowed quadratic fits to the vg(psi) curve
- :mod:`flowfit.est_xy` -- constrained least squares on (xdot, ydot, psi)
- :mod:`flowfit.est_vg` -- constrained least squares on (vg, psi)

plus a RANSAC wrapper for outlier-ridden field logs (:mod:`flowfit.ransac`)
and a Monte Carlo comparison harness (:mod:`flowfit.bench`).
"""

__version__ = "0.1.0"

from .errors import (
    ConsensusFailureError,
    DegenerateGeometryError,
    DegenerateParametersError,
    FitQualityError,
    FlowfitError,
    InsufficientCoverageError,
    InsufficientDataError,
    OptimizationFailureError,
)
from .model import (
    Dataset,
    DatasetMeta,
    EstimateReport,
    FlowParams,
    GroundSpeedSample,
    Polytope,
    VelSample,
    forward_ground_speed,
    forward_velocity,
    simulate,
    to_ground_speed,
)

__all__ = [
    "__version__",
    "ConsensusFailureError",
    "Dataset",
    "DatasetMeta",
    "DegenerateGeometryError",
    "DegenerateParametersError",
    "EstimateReport",
    "FitQualityError",
    "FlowParams",
    "FlowfitError",
    "GroundSpeedSample",
    "InsufficientCoverageError",
    "InsufficientDataError",
    "OptimizationFailureError",
    "Polytope",
    "VelSample",
    "forward_ground_speed",
    "forward_velocity",
    "simulate",
    "to_ground_speed",
]
