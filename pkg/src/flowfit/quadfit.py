"""Quadratic curve-fit estimator on (ground speed, heading) data.

Over a full revolution the ground-speed curve vg(psi) has one maximum
(heading aligned with the current, value v + w) and one minimum (opposed,
value v - w). Windowed second-order polynomial fits around each extremum
give vertex coordinates (psi_max, v_max) and (psi_min, v_min), from which

    v = (v_max + v_min) / 2
    w = (v_max - v_min) / 2
    theta = atan2(sin psi_max - sin psi_min, cos psi_max - cos psi_min)

the last being the wrap-aware average of psi_max and psi_min - pi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import TWO_PI, wrap_to_2pi, wrapped_diff
from .errors import (
    DegenerateGeometryError,
    FitQualityError,
    InsufficientCoverageError,
    InsufficientDataError,
)
from .model import Dataset, EstimateReport, FlowParams, KIND_GROUND_SPEED

DEFAULT_LAMBDA = 0.5

# Coverage shortfall tolerated before the full-revolution precondition fails;
# must exceed the sample spacing of any dataset this method is meant for.
DEFAULT_COVERAGE_TOL = 0.35

# Samples in the circular moving average used for the extremum guess.
SMOOTH_WINDOW = 5

_FLAT_REL = 1e-9


@dataclass(frozen=True)
class QuadCoeffs:
    """Quadratic a*psi^2 + b*psi + c fitted over a wrapped heading window."""

    a: float
    b: float
    c: float
    window_center: float
    window_halfwidth: float

    @property
    def vertex_psi(self) -> float:
        return -self.b / (2.0 * self.a)

    @property
    def vertex_value(self) -> float:
        return self.c - self.b * self.b / (4.0 * self.a)


def _coverage_span(psi: np.ndarray) -> float:
    """Span of unique headings: 2pi minus the largest circular gap."""
    wrapped = np.sort(wrap_to_2pi(psi))
    gaps = np.diff(wrapped)
    wrap_gap = TWO_PI - (wrapped[-1] - wrapped[0])
    max_gap = max(float(np.max(gaps, initial=0.0)), float(wrap_gap))
    return TWO_PI - max_gap


def locate_extrema(
    d: Dataset, coverage_tol: float = DEFAULT_COVERAGE_TOL
) -> tuple[float, float]:
    """Initial guesses for the headings of the ground-speed max and min.

    Smooths vg with a short circular moving average over heading-sorted
    samples and takes the arg-extrema. Requires near-full heading coverage;
    raises InsufficientCoverageError otherwise and DegenerateGeometryError
    when the curve is flat (no current to locate).
    """
    d.require(KIND_GROUND_SPEED)
    if d.n < 3:
        raise InsufficientDataError(f"need at least 3 samples, got {d.n}")
    span = _coverage_span(d.psi)
    if span < TWO_PI - coverage_tol:
        raise InsufficientCoverageError(
            f"heading span {span:.3f} rad < full revolution; "
            "the quadratic method needs a complete orbit"
        )

    order = np.argsort(wrap_to_2pi(d.psi))
    psi_sorted = wrap_to_2pi(d.psi)[order]
    vg_sorted = d.vg[order]

    win = min(SMOOTH_WINDOW, d.n)
    half = win // 2
    idx = (np.arange(d.n)[:, None] + np.arange(-half, half + 1)[None, :]) % d.n
    smoothed = vg_sorted[idx].mean(axis=1)

    scale = max(1.0, float(np.median(np.abs(vg_sorted))))
    if float(np.max(smoothed) - np.min(smoothed)) <= _FLAT_REL * scale:
        raise DegenerateGeometryError(
            "ground-speed curve is flat; current magnitude indeterminate"
        )
    return float(psi_sorted[np.argmax(smoothed)]), float(psi_sorted[np.argmin(smoothed)])


def window_fit(d: Dataset, center: float, lam: float) -> QuadCoeffs:
    """Least-squares quadratic over samples within ``lam`` of ``center``.

    Window membership uses wrapped angular distance and the selected
    headings are unwrapped onto the contiguous branch around ``center``
    before fitting, so windows straddling the 0/2pi seam behave like any
    other. Coefficients are returned on the raw psi axis.
    """
    d.require(KIND_GROUND_SPEED)
    if lam <= 0.0:
        raise ValueError(f"window half-width must be positive, got {lam}")
    u = wrapped_diff(d.psi, center)
    mask = np.abs(u) <= lam
    n_in = int(np.count_nonzero(mask))
    if n_in < 3:
        raise InsufficientDataError(
            f"only {n_in} samples within {lam:.3f} rad of heading {center:.3f}"
        )
    uu = u[mask]
    vv = d.vg[mask]
    # Fit in the centered variable for conditioning, then shift back.
    ac, bc, cc = np.polyfit(uu, vv, 2)
    a = float(ac)
    b = float(bc - 2.0 * ac * center)
    c = float(ac * center * center - bc * center + cc)
    return QuadCoeffs(a, b, c, window_center=float(center), window_halfwidth=float(lam))


def _window_ssr(d: Dataset, q: QuadCoeffs) -> float:
    u = wrapped_diff(d.psi, q.window_center)
    mask = np.abs(u) <= q.window_halfwidth
    psi_u = q.window_center + u[mask]
    pred = q.a * psi_u**2 + q.b * psi_u + q.c
    return float(np.sum((d.vg[mask] - pred) ** 2))


def _indeterminate_report(d: Dataset) -> EstimateReport:
    v_hat = float(np.mean(d.vg))
    if v_hat <= 0.0:
        raise FitQualityError("mean ground speed is not positive")
    return EstimateReport(
        method="quad",
        params=FlowParams(v_hat, 0.0, 0.0),
        cost=float(np.sum((d.vg - v_hat) ** 2)),
        n_used=d.n,
        diagnostics={"direction_indeterminate": True, "flat_curve": True},
    )


def fit(
    d: Dataset,
    lam: float = DEFAULT_LAMBDA,
    coverage_tol: float = DEFAULT_COVERAGE_TOL,
) -> EstimateReport:
    """Estimate (v, w, theta) from the two windowed quadratic fits.

    ``lam`` trades Taylor bias (large windows) against noise sensitivity
    (small windows). A flat curve yields w = 0 with a
    ``direction_indeterminate`` flag instead of an error.
    """
    try:
        psi0_max, psi0_min = locate_extrema(d, coverage_tol=coverage_tol)
    except DegenerateGeometryError:
        return _indeterminate_report(d)

    q_max = window_fit(d, psi0_max, lam)
    q_min = window_fit(d, psi0_min, lam)
    if q_max.a >= 0.0:
        raise FitQualityError(
            f"fit at the speed maximum has curvature {q_max.a:+.3g}, expected negative"
        )
    if q_min.a <= 0.0:
        raise FitQualityError(
            f"fit at the speed minimum has curvature {q_min.a:+.3g}, expected positive"
        )

    psi_max, v_max = q_max.vertex_psi, q_max.vertex_value
    psi_min, v_min = q_min.vertex_psi, q_min.vertex_value
    v_hat = 0.5 * (v_max + v_min)
    w_hat = 0.5 * (v_max - v_min)
    if v_hat <= 0.0:
        raise FitQualityError(f"recovered vehicle speed {v_hat:.3g} is not positive")
    if w_hat < 0.0:
        raise FitQualityError("fitted maximum lies below fitted minimum")

    theta_hat = float(
        wrap_to_2pi(
            np.arctan2(
                np.sin(psi_max) - np.sin(psi_min),
                np.cos(psi_max) - np.cos(psi_min),
            )
        )
    )
    diagnostics = {
        "psi_max": float(wrap_to_2pi(psi_max)),
        "psi_min": float(wrap_to_2pi(psi_min)),
        "v_max": float(v_max),
        "v_min": float(v_min),
        "a_max_window": q_max.a,
        "a_min_window": q_min.a,
    }
    if w_hat > v_hat:
        diagnostics["w_clamped"] = w_hat - v_hat
        w_hat = v_hat

    return EstimateReport(
        method="quad",
        params=FlowParams(v_hat, w_hat, theta_hat),
        cost=_window_ssr(d, q_max) + _window_ssr(d, q_min),
        n_used=d.n,
        diagnostics=diagnostics,
    )
