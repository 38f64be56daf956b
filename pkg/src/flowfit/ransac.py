"""Random sample consensus wrapper around the optimization estimators.

Field maneuvers pick up samples that do not belong to the steady-flow model
(entry and exit transients around an orbit, for example). The wrapper
repeatedly fits a candidate model on a small random subset, scores it by
how many samples it explains, keeps the largest consensus set, and refits
on those inliers alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, optim
from .errors import ConsensusFailureError, FlowfitError, InsufficientDataError
from .model import Dataset, EstimateReport, KIND_VELOCITY, Polytope

# Floor applied to the adaptive threshold so that exact data (residuals at
# machine roundoff) classifies cleanly. Explicit thresholds are used as-is.
_ADAPTIVE_FLOOR = 1e-9

# MAD-to-sigma factor for Gaussian noise.
_MAD_SCALE = 1.4826


@dataclass(frozen=True)
class RansacConfig:
    """Knobs for the consensus loop.

    ``inlier_threshold=None`` selects a per-candidate adaptive threshold of
    3 sigma, with sigma estimated robustly from the candidate's residuals
    (scaled median absolute deviation). ``min_sample`` stays well above the
    algebraic minimum of 3 because the nonlinear fits are unstable on tiny
    heading ranges.
    """

    iterations: int = 100
    min_sample: int = 10
    inlier_threshold: float | None = None
    min_inliers_frac: float = 0.5
    seed: int | None = None

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("need at least one iteration")
        if self.min_sample < 3:
            raise ValueError("min_sample must be at least 3")
        if not (0.0 < self.min_inliers_frac <= 1.0):
            raise ValueError("min_inliers_frac must be in (0, 1]")


def residuals(d: Dataset, params) -> np.ndarray:
    """Per-sample residual against the model: Euclidean velocity distance
    for component data, |vg - predicted speed| for ground-speed data."""
    from .model import param_triple

    v, w, theta = param_triple(params)
    if d.kind == KIND_VELOCITY:
        return kernels.xy_residuals(d.xdot, d.ydot, d.psi, v, w, theta)
    return kernels.vg_residuals(d.vg, d.psi, v, w, theta)


def _adaptive_threshold(candidate_residuals: list[np.ndarray]) -> float:
    """Common threshold from the candidate that fits the majority tightest.

    The residuals are absolute deviations from the model, so the robust
    noise scale is the scaled median absolute residual of the best
    (smallest-median) candidate; the threshold is 3 sigma of that. Using
    one common threshold keeps the max-consensus rule meaningful: a
    per-candidate threshold would reward sloppy fits with wide residual
    spreads.
    """
    best = min(candidate_residuals, key=lambda r: float(np.median(r)))
    sigma_hat = _MAD_SCALE * float(np.median(best))
    return max(3.0 * sigma_hat, _ADAPTIVE_FLOOR)


def robust_estimate(
    d: Dataset, estimator, cfg: RansacConfig, poly: Polytope
) -> EstimateReport:
    """RANSAC loop around ``estimator`` (est_xy.estimate or est_vg.estimate).

    Candidate fits use a single start at the polytope centroid for speed;
    the final refit on the winning consensus set uses the full multi-start.
    Deterministic for a fixed config seed. Raises ConsensusFailureError when
    no candidate explains ``min_inliers_frac`` of the data.
    """
    if d.n < cfg.min_sample:
        raise InsufficientDataError(
            f"need at least min_sample={cfg.min_sample} samples, got {d.n}"
        )
    rng = np.random.default_rng(cfg.seed)
    centroid_start = [optim.start_points(poly)[-1]]

    candidate_residuals: list[np.ndarray] = []
    candidate_iters: list[int] = []
    n_candidate_failures = 0
    for it in range(cfg.iterations):
        idx = rng.choice(d.n, size=cfg.min_sample, replace=False)
        subset = d.select(np.sort(idx))
        try:
            candidate = estimator(subset, poly, starts=centroid_start)
        except FlowfitError:
            n_candidate_failures += 1
            continue
        candidate_residuals.append(residuals(d, candidate.params))
        candidate_iters.append(it)

    best_mask = None
    best_count = -1
    best_index = -1
    threshold = None
    if candidate_residuals:
        if cfg.inlier_threshold is not None:
            threshold = float(cfg.inlier_threshold)
        else:
            threshold = _adaptive_threshold(candidate_residuals)
        for it, r in zip(candidate_iters, candidate_residuals):
            mask = r <= threshold
            count = int(np.count_nonzero(mask))
            if count > best_count:
                best_mask = mask
                best_count = count
                best_index = it

    if best_mask is None or best_count < cfg.min_inliers_frac * d.n:
        raise ConsensusFailureError(
            f"best consensus {max(best_count, 0)}/{d.n} below required fraction "
            f"{cfg.min_inliers_frac} after {cfg.iterations} iterations"
        )

    refit = estimator(d.select(best_mask), poly)
    diagnostics = dict(refit.diagnostics)
    diagnostics.update(
        consensus_size=best_count,
        winning_iteration=best_index,
        threshold=threshold,
        candidate_failures=n_candidate_failures,
    )
    return EstimateReport(
        method=f"ransac-{refit.method}",
        params=refit.params,
        cost=refit.cost,
        n_used=refit.n_used,
        n_excluded=refit.n_excluded,
        converged=refit.converged,
        iterations=refit.iterations,
        inlier_mask=best_mask,
        diagnostics=diagnostics,
    )
