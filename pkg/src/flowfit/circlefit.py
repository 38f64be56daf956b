"""Closed-form circle fit to ground-velocity components.

Over a heading-change maneuver the points (xdot, ydot) lie on a circle of
radius v centered at the current velocity (w_x, w_y):

    (xdot - w_x)^2 + (ydot - w_y)^2 = v^2

which rearranges into a system linear in c = [-2 w_x, -2 w_y,
-v^2 + w_x^2 + w_y^2]: each sample contributes a row
[xdot_i, ydot_i, 1] c = -(xdot_i^2 + ydot_i^2). Solving in the least-squares
sense and inverting the substitution recovers (v, w, theta). Heading data is
not used by this method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import wrap_to_2pi
from .errors import DegenerateGeometryError, InsufficientDataError
from .model import Dataset, EstimateReport, FlowParams, KIND_VELOCITY

# Relative w below which the current direction is meaningless.
DIRECTION_EPS = 1e-9

# Condition-number ceiling for the least-squares system; beyond this the
# ground velocities are effectively collinear.
COND_LIMIT = 1e10


@dataclass(frozen=True)
class CircleCoeffs:
    """Coefficients of the linearized circle equation."""

    c1: float
    c2: float
    c3: float

    @property
    def radius_sq(self) -> float:
        return 0.25 * (self.c1 * self.c1 + self.c2 * self.c2) - self.c3

    @property
    def center(self) -> tuple[float, float]:
        return -0.5 * self.c1, -0.5 * self.c2


def build_system(d: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Assemble rows [xdot, ydot, 1] and rhs -(xdot^2 + ydot^2)."""
    d.require(KIND_VELOCITY)
    if d.n < 3:
        raise InsufficientDataError(f"circle fit needs at least 3 samples, got {d.n}")
    A = np.column_stack([d.xdot, d.ydot, np.ones(d.n)])
    b = -(d.xdot**2 + d.ydot**2)
    return A, b


def solve_coeffs(d: Dataset) -> tuple[CircleCoeffs, float]:
    """Least-squares solve for the circle coefficients.

    Uses an orthogonal factorization (lstsq) rather than forming the normal
    equations. Returns the coefficients and the residual cost ||Ac - b||^2.
    """
    A, b = build_system(d)
    c, _, rank, sv = np.linalg.lstsq(A, b, rcond=None)
    if rank < 3 or sv[0] > COND_LIMIT * sv[-1]:
        raise DegenerateGeometryError(
            "ground velocities are collinear; heading change too small"
        )
    cost = float(np.sum((A @ c - b) ** 2))
    return CircleCoeffs(float(c[0]), float(c[1]), float(c[2])), cost


def fit(d: Dataset) -> EstimateReport:
    """Estimate (v, w, theta) by the circular curve fit.

    Raises DegenerateGeometryError when the velocities are collinear or the
    recovered radius argument is not positive. When the recovered current is
    numerically zero the direction is reported as 0 with a
    ``direction_indeterminate`` flag.
    """
    coeffs, cost = solve_coeffs(d)
    radius_sq = coeffs.radius_sq
    if radius_sq <= 0.0:
        raise DegenerateGeometryError(
            f"recovered radius argument {radius_sq} is not positive"
        )
    v_hat = float(np.sqrt(radius_sq))
    w_x, w_y = coeffs.center
    w_hat = float(np.hypot(w_x, w_y))

    diagnostics = {"coeffs": (coeffs.c1, coeffs.c2, coeffs.c3)}
    if w_hat < DIRECTION_EPS * v_hat:
        theta_hat = 0.0
        diagnostics["direction_indeterminate"] = True
    else:
        theta_hat = float(wrap_to_2pi(np.arctan2(w_y, w_x)))
    if w_hat > v_hat:
        # Unconstrained recovery can land just outside the w <= v region
        # under noise; project back and record it.
        diagnostics["w_clamped"] = w_hat - v_hat
        w_hat = v_hat

    return EstimateReport(
        method="circle",
        params=FlowParams(v_hat, w_hat, theta_hat),
        cost=cost,
        n_used=d.n,
        diagnostics=diagnostics,
    )
