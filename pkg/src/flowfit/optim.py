"""Constrained minimizer for smooth 3-parameter costs over the Polytope.

A log-barrier interior-point method: for a decreasing barrier weight mu the
smooth subproblem

    minimize  f(x) - mu * sum_j log(h_j - g_j . x)

is solved by Newton's method with backtracking line search, warm-starting
each stage at the previous solution. Multi-start over the polytope corners
and centroid guards against local minima; the lowest-cost feasible result
wins.

Callbacks receive the raw parameter triple as a length-3 ndarray
``[v, w, theta]`` and must be pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .angles import TWO_PI
from .errors import OptimizationFailureError
from .model import FlowParams, Polytope, param_triple

MU_INITIAL = 1.0
MU_FACTOR = 0.1
MU_MIN = 1e-9
GRAD_TOL = 1e-9
STAGE_ITER_CAP = 200
TOTAL_ITER_CAP = 2000
ARMIJO_C = 1e-4
START_MARGIN_FRAC = 1e-3

# Sufficient-decrease comparisons are meaningless below the cost's own
# evaluation roundoff (the costs are sums of large cancelling terms), so the
# Armijo test carries an absolute slack of this many ulps of the largest
# cost magnitude seen along the run.
F_NOISE_ULPS = 32.0


@dataclass(frozen=True)
class OptProblem:
    """Cost with analytical gradient and Hessian, plus the feasible region."""

    cost: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray]
    constraints: Polytope


@dataclass(frozen=True)
class OptResult:
    params: FlowParams
    cost: float
    converged: bool
    iterations: int
    start_point: FlowParams
    grad_norm: float = float("nan")


def start_points(poly: Polytope) -> list[FlowParams]:
    """Corners of the (v, w, theta) polytope plus its centroid.

    The eight corners are v in {v_min, v_max}, w in {0, v}, theta in
    {0, 2pi}; each point (and the corner average) is nudged strictly inside
    the feasible region so barrier methods can start there.
    """
    if not (poly.v_max > poly.v_min):
        raise ValueError("polytope has empty interior")
    corners = [
        (v, w, th)
        for v in (poly.v_min, poly.v_max)
        for w in (0.0, v)
        for th in (0.0, TWO_PI)
    ]
    centroid = tuple(np.mean(np.array(corners), axis=0))
    delta = START_MARGIN_FRAC * (poly.v_max - poly.v_min)

    points = []
    for v, w, th in corners + [centroid]:
        v = min(max(v, poly.v_min + delta), poly.v_max - delta)
        d_w = min(delta, v / 3.0)  # keep the w interval nonempty
        w = min(max(w, d_w), v - d_w)
        th = min(max(th, delta), TWO_PI - delta)
        points.append(FlowParams(v, w, th))
    return points


def _newton_step(H: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Solve H p = -g, shifting H by tau*I until positive definite."""
    tau = 0.0
    base = 1e-10 * max(1.0, float(np.max(np.abs(np.diag(H)))))
    for _ in range(60):
        try:
            L = np.linalg.cholesky(H + tau * np.eye(3))
        except np.linalg.LinAlgError:
            tau = base if tau == 0.0 else tau * 10.0
            continue
        y = np.linalg.solve(L, -g)
        return np.linalg.solve(L.T, y)
    raise np.linalg.LinAlgError("could not regularize Hessian")


def _minimize_single(
    prob: OptProblem, x0: np.ndarray, G: np.ndarray, h: np.ndarray
) -> tuple[np.ndarray, bool, int, float]:
    """Barrier stages from one start.

    A stage ends when the barriered gradient drops below GRAD_TOL, when no
    representable progress is possible (Newton steps below float
    resolution, common when a constraint is active and the barrier Hessian
    is ~1/mu), or at the stage iteration cap. The run counts as converged
    when the final stage ended on tolerance or on the resolution floor.

    Returns (x, converged, iterations, final gradient norm).
    """
    x = np.array(x0, dtype=float)
    iterations = 0
    stage_exit = "cap"
    gn = float("nan")
    f_scale = 1.0
    eps = float(np.finfo(float).eps)

    mu = MU_INITIAL
    while mu >= MU_MIN:
        stage_exit = "cap"
        for _ in range(STAGE_ITER_CAP):
            if iterations >= TOTAL_ITER_CAP:
                return x, False, iterations, gn
            iterations += 1

            s = h - G @ x
            grad = prob.gradient(x) + mu * (G.T @ (1.0 / s))
            gn = float(np.linalg.norm(grad))
            # The barrier gradient cannot be resolved below its own float
            # granularity ~ mu/s^2 * ulp(x); near an active constraint that
            # sits far above GRAD_TOL, so the tolerance must follow it.
            g_floor = 4.0 * eps * (1.0 + float(np.max(np.abs(x)))) * mu * float(
                np.sum(1.0 / s**2)
            )
            if gn < max(GRAD_TOL, g_floor):
                stage_exit = "tol"
                break
            hess = prob.hessian(x) + mu * ((G.T * (1.0 / s**2)) @ G)
            p = _newton_step(hess, grad)

            # Cap the step to stay strictly inside the feasible region.
            Gp = G @ p
            pos = Gp > 0.0
            t = 1.0
            if np.any(pos):
                t = min(1.0, 0.99 * float(np.min(s[pos] / Gp[pos])))
            t_init = t

            f0 = prob.cost(x) - mu * float(np.sum(np.log(s)))
            f_scale = max(f_scale, abs(f0))
            noise_tol = F_NOISE_ULPS * eps * f_scale
            slope = float(grad @ p)
            accepted = False
            x_acc = x
            while t > 1e-16:
                x_new = x + t * p
                s_new = h - G @ x_new
                if np.min(s_new) > 0.0:
                    f_new = prob.cost(x_new) - mu * float(np.sum(np.log(s_new)))
                    f_scale = max(f_scale, abs(f_new))
                    if f_new <= f0 + ARMIJO_C * t * slope + noise_tol:
                        x_acc = x_new
                        accepted = True
                        break
                t *= 0.5
            if not accepted:
                # Last resort: the capped full Newton step, accepted on
                # gradient contraction alone.
                x_try = x + t_init * p
                s_try = h - G @ x_try
                if np.min(s_try) > 0.0:
                    g_try = prob.gradient(x_try) + mu * (G.T @ (1.0 / s_try))
                    if float(np.linalg.norm(g_try)) < gn:
                        x_acc = x_try
                        accepted = True
            if not accepted or np.array_equal(x_acc, x):
                stage_exit = "floor"
                break
            x = x_acc
        mu *= MU_FACTOR
    return x, stage_exit in ("tol", "floor"), iterations, gn


def _rescore_theta_seam(prob: OptProblem, x: np.ndarray) -> np.ndarray:
    """Re-score with theta shifted by +-2pi and clamped into [0, 2pi].

    The box treats theta as a plain coordinate, so a minimum pressed against
    one seam edge may score better at the other; keep whichever evaluates
    lower.
    """
    best = x
    best_cost = prob.cost(x)
    for shift in (TWO_PI, -TWO_PI):
        theta_alt = min(max(x[2] + shift, 0.0), TWO_PI)
        if theta_alt == x[2]:
            continue
        x_alt = np.array([x[0], x[1], theta_alt])
        c_alt = prob.cost(x_alt)
        if c_alt < best_cost:
            best, best_cost = x_alt, c_alt
    return best


def run_starts(prob: OptProblem, starts: Sequence) -> list[OptResult]:
    """Run the barrier method from every start point.

    ``starts`` holds FlowParams (or triples), each strictly feasible.
    Results come back in start order, one per start.
    """
    if not starts:
        raise ValueError("need at least one start point")
    G, h = prob.constraints.constraint_matrix()

    results: list[OptResult] = []
    for start in starts:
        x0 = np.array(param_triple(start), dtype=float)
        if float(np.min(h - G @ x0)) <= 0.0:
            raise ValueError(f"start point {x0} is not strictly feasible")
        x, converged, iterations, grad_norm = _minimize_single(prob, x0, G, h)
        x = _rescore_theta_seam(prob, x)
        results.append(
            OptResult(
                params=FlowParams(*x),
                cost=float(prob.cost(x)),
                converged=converged,
                iterations=iterations,
                start_point=FlowParams(*x0),
                grad_norm=grad_norm,
            )
        )
    return results


def describe(results: Sequence[OptResult]) -> list[dict]:
    """Per-start summaries, suitable for report diagnostics."""
    return [
        {
            "start": param_triple(r.start_point),
            "cost": r.cost,
            "converged": r.converged,
            "iterations": r.iterations,
            "grad_norm": r.grad_norm,
        }
        for r in results
    ]


def select_best(results: Sequence[OptResult]) -> OptResult:
    """Lowest unbarriered cost wins; ties break toward the earlier start.

    Raises OptimizationFailureError (with per-start diagnostics) when no
    start converged.
    """
    if not any(r.converged for r in results):
        raise OptimizationFailureError(
            "no start point converged", diagnostics=describe(results)
        )
    best = min(range(len(results)), key=lambda i: (results[i].cost, i))
    return results[best]


def minimize(prob: OptProblem, starts: Sequence) -> OptResult:
    """Run the barrier method from every start and keep the best result."""
    return select_best(run_starts(prob, starts))
