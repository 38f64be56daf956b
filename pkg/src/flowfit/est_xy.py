"""Least-squares estimator on (xdot, ydot, psi) data.

The cost is half the sum of squared residuals between measured and
predicted velocity components. Expanding the squares shows the cost is
linear in eight data sums k1..k8, so the data is folded into those sums
once and every cost, gradient, and Hessian evaluation afterwards is O(1):

    J = (N/2) v^2 + (N/2) w^2 + k3/2 + k4/2 - (k7 + k8) v
        - (k1 cos(theta) + k2 sin(theta)) w + (k5 cos(theta) + k6 sin(theta)) v w
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin

import numpy as np

from . import kernels, optim
from .errors import InsufficientDataError
from .model import Dataset, EstimateReport, KIND_VELOCITY, Polytope, param_triple

METHOD = "opt-xy"


@dataclass(frozen=True)
class SufficientStats:
    """The eight data sums and the sample count.

    k1 = sum xdot, k2 = sum ydot, k3 = sum xdot^2, k4 = sum ydot^2,
    k5 = sum cos psi, k6 = sum sin psi, k7 = sum xdot cos psi,
    k8 = sum ydot sin psi. k7 and k8 only ever appear summed but are kept
    separate.
    """

    k1: float
    k2: float
    k3: float
    k4: float
    k5: float
    k6: float
    k7: float
    k8: float
    n: int


def stats(d: Dataset) -> SufficientStats:
    """Fold a velocity dataset into its sufficient sums (single pass)."""
    d.require(KIND_VELOCITY)
    k = kernels.xy_stats(d.xdot, d.ydot, d.psi)
    return SufficientStats(*k, n=d.n)


def cost(s: SufficientStats, p) -> float:
    v, w, theta = param_triple(p)
    ct, st = cos(theta), sin(theta)
    return (
        0.5 * s.n * (v * v + w * w)
        + 0.5 * (s.k3 + s.k4)
        - (s.k7 + s.k8) * v
        - (s.k1 * ct + s.k2 * st) * w
        + (s.k5 * ct + s.k6 * st) * v * w
    )


def gradient(s: SufficientStats, p) -> np.ndarray:
    v, w, theta = param_triple(p)
    ct, st = cos(theta), sin(theta)
    dv = s.n * v - (s.k7 + s.k8) + (s.k5 * ct + s.k6 * st) * w
    dw = s.n * w + (s.k5 * v - s.k1) * ct + (s.k6 * v - s.k2) * st
    dt = (s.k1 - s.k5 * v) * w * st + (s.k6 * v - s.k2) * w * ct
    return np.array([dv, dw, dt])


def hessian(s: SufficientStats, p) -> np.ndarray:
    v, w, theta = param_triple(p)
    ct, st = cos(theta), sin(theta)
    h_vw = s.k5 * ct + s.k6 * st
    h_vt = (s.k6 * ct - s.k5 * st) * w
    h_wt = (s.k1 - s.k5 * v) * st + (s.k6 * v - s.k2) * ct
    h_tt = (s.k1 - s.k5 * v) * w * ct + (s.k2 - s.k6 * v) * w * st
    return np.array(
        [
            [float(s.n), h_vw, h_vt],
            [h_vw, float(s.n), h_wt],
            [h_vt, h_wt, h_tt],
        ]
    )


def problem(d: Dataset, poly: Polytope) -> optim.OptProblem:
    """Build the constrained problem over precomputed sums."""
    s = stats(d)
    return optim.OptProblem(
        cost=lambda x: cost(s, x),
        gradient=lambda x: gradient(s, x),
        hessian=lambda x: hessian(s, x),
        constraints=poly,
    )


def estimate(d: Dataset, poly: Polytope, *, starts=None) -> EstimateReport:
    """Multi-start constrained minimization of the component-velocity cost.

    ``starts`` defaults to the polytope corners plus centroid; RANSAC
    candidate fits pass a reduced list.
    """
    if d.n < 3:
        raise InsufficientDataError(f"need at least 3 samples, got {d.n}")
    prob = problem(d, poly)
    if starts is None:
        starts = optim.start_points(poly)
    results = optim.run_starts(prob, starts)
    result = optim.select_best(results)
    return EstimateReport(
        method=METHOD,
        params=result.params,
        cost=result.cost,
        n_used=d.n,
        converged=result.converged,
        iterations=result.iterations,
        diagnostics={
            "start_point": param_triple(result.start_point),
            "per_start": optim.describe(results),
        },
    )
