"""Least-squares estimator on (ground speed, heading) data.

The cost is half the sum of squared residuals between measured ground
speed and the model curve sqrt(alpha_i), where

    alpha_i = v^2 + 2 v w cos(psi_i - theta) + w^2

Unlike the component-velocity cost this one is nonlinear in the data, so
the per-sample sums are recomputed at every iteration (the hot kernels in
:mod:`flowfit.kernels`). The gradient and Hessian are undefined where
alpha_i = 0 (vehicle exactly cancelled by the current); such samples are
excluded per evaluation and counted.
"""

from __future__ import annotations

import numpy as np

from . import kernels, optim
from .errors import DegenerateParametersError, InsufficientDataError
from .model import Dataset, EstimateReport, KIND_GROUND_SPEED, Polytope, param_triple

METHOD = "opt-vg"

# Absolute floor on alpha_i; alpha has units (m/s)^2 and is O(1..25) for
# realistic marine speeds.
ALPHA_EPS = 1e-12


def _check(d: Dataset) -> None:
    d.require(KIND_GROUND_SPEED)


def cost_with_exclusions(d: Dataset, p, eps: float = ALPHA_EPS) -> tuple[float, int]:
    """Cost and the number of samples excluded for singular alpha."""
    _check(d)
    v, w, theta = param_triple(p)
    value, n_excluded = kernels.vg_cost(d.vg, d.psi, v, w, theta, eps)
    if n_excluded >= d.n:
        raise DegenerateParametersError(
            "model slope singular at every sample for these parameters"
        )
    return float(value), int(n_excluded)


def cost(d: Dataset, p, eps: float = ALPHA_EPS) -> float:
    return cost_with_exclusions(d, p, eps)[0]


def gradient(d: Dataset, p, eps: float = ALPHA_EPS) -> np.ndarray:
    _check(d)
    v, w, theta = param_triple(p)
    _, grad, _, n_excluded = kernels.vg_cost_grad_hess(d.vg, d.psi, v, w, theta, eps)
    if n_excluded >= d.n:
        raise DegenerateParametersError("gradient undefined at every sample")
    return grad


def hessian(d: Dataset, p, eps: float = ALPHA_EPS) -> np.ndarray:
    _check(d)
    v, w, theta = param_triple(p)
    _, _, hess, n_excluded = kernels.vg_cost_grad_hess(d.vg, d.psi, v, w, theta, eps)
    if n_excluded >= d.n:
        raise DegenerateParametersError("Hessian undefined at every sample")
    return hess


class _Evaluator:
    """One-slot cache so the optimizer's gradient + Hessian calls at the
    same point cost a single fused kernel pass."""

    def __init__(self, d: Dataset, eps: float):
        self.vg = d.vg
        self.psi = d.psi
        self.eps = eps
        self._key = None
        self._val = None

    def _fused(self, x):
        key = (x[0], x[1], x[2])
        if key != self._key:
            self._val = kernels.vg_cost_grad_hess(
                self.vg, self.psi, key[0], key[1], key[2], self.eps
            )
            self._key = key
        return self._val

    def cost(self, x):
        value, n_excluded = kernels.vg_cost(self.vg, self.psi, x[0], x[1], x[2], self.eps)
        if n_excluded >= self.psi.size:
            raise DegenerateParametersError("all samples excluded")
        return float(value)

    def gradient(self, x):
        return self._fused(x)[1]

    def hessian(self, x):
        return self._fused(x)[2]


def problem(d: Dataset, poly: Polytope, eps: float = ALPHA_EPS) -> optim.OptProblem:
    _check(d)
    ev = _Evaluator(d, eps)
    return optim.OptProblem(
        cost=ev.cost, gradient=ev.gradient, hessian=ev.hessian, constraints=poly
    )


def estimate(d: Dataset, poly: Polytope, *, starts=None) -> EstimateReport:
    """Multi-start constrained minimization of the ground-speed cost."""
    if d.n < 3:
        raise InsufficientDataError(f"need at least 3 samples, got {d.n}")
    prob = problem(d, poly)
    if starts is None:
        starts = optim.start_points(poly)
    results = optim.run_starts(prob, starts)
    result = optim.select_best(results)
    _, n_excluded = cost_with_exclusions(d, result.params)
    return EstimateReport(
        method=METHOD,
        params=result.params,
        cost=result.cost,
        n_used=d.n - n_excluded,
        n_excluded=n_excluded,
        converged=result.converged,
        iterations=result.iterations,
        diagnostics={
            "start_point": param_triple(result.start_point),
            "per_start": optim.describe(results),
        },
    )
