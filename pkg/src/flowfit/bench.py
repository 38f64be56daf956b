"""Monte Carlo comparison of the four estimators.

For every (noise level, heading span) cell, a batch of trials each draws a
true parameter triple uniformly from the polytope interior, simulates a
noisy maneuver, hands the same dataset to every method, and records the
absolute estimation errors. Per-trial RNG streams are derived from
(seed, cell, trial) so methods see identical data within a trial and the
whole run is reproducible from one seed.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from . import circlefit, est_vg, est_xy, quadfit
from .angles import TWO_PI, wrapped_abs_deg
from .errors import FlowfitError
from .model import Dataset, FlowParams, Polytope, simulate, to_ground_speed

METHOD_ORDER = ("circle", "quad", "opt-xy", "opt-vg")

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class BenchConfig:
    """Experiment grid. Defaults: noise stds {0.01, 0.05, 0.10} m/s, heading
    spans {2pi, 3pi/2, pi}, 250 trials of 100 samples each, speed bounds
    (0.5, 5) m/s."""

    sigmas: tuple[float, ...] = (0.01, 0.05, 0.10)
    spans: tuple[float, ...] = (TWO_PI, 1.5 * np.pi, np.pi)
    trials: int = 250
    n: int = 100
    poly: Polytope = field(default_factory=lambda: Polytope(0.5, 5.0))
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.n < 3:
            raise ValueError("need at least 3 samples per dataset")

    def to_dict(self) -> dict:
        return {
            "sigmas": list(self.sigmas),
            "spans": list(self.spans),
            "trials": self.trials,
            "n": self.n,
            "v_min": self.poly.v_min,
            "v_max": self.poly.v_max,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class TrialRecord:
    method: str
    sigma: float
    span: float
    trial: int
    true: tuple[float, float, float]
    est: tuple[float, float, float] | None
    abs_err: tuple[float, float, float] | None  # (v, w, theta in degrees)
    failed: bool = False
    reason: str | None = None


def sample_params(poly: Polytope, rng: np.random.Generator) -> FlowParams:
    """Uniform draw from the open interior of the polytope.

    (v, w) are rejection-sampled on the bounding box [v_min, v_max] x
    [0, v_max] until strictly inside 0 < w < v; theta is uniform on
    (0, 2pi). The joint density is uniform over the feasible region.
    """
    while True:
        v = rng.uniform(poly.v_min, poly.v_max)
        w = rng.uniform(0.0, poly.v_max)
        if poly.v_min < v < poly.v_max and 0.0 < w < v:
            break
    theta = rng.uniform(0.0, TWO_PI)
    return FlowParams(v, w, theta)


def _is_full_revolution(span: float) -> bool:
    return abs(span - TWO_PI) < 1e-9


def methods_for_span(span: float) -> tuple[str, ...]:
    if _is_full_revolution(span):
        return ("circle", "quad", "opt-xy", "opt-vg")
    return ("circle", "opt-xy", "opt-vg")


def _run_method(method: str, d: Dataset, d_vg: Dataset, poly: Polytope):
    if method == "circle":
        return circlefit.fit(d)
    if method == "quad":
        return quadfit.fit(d_vg)
    if method == "opt-xy":
        return est_xy.estimate(d, poly)
    if method == "opt-vg":
        return est_vg.estimate(d_vg, poly)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class BenchResult:
    config: BenchConfig
    records: list[TrialRecord]

    def cell(self, method: str, sigma: float, span: float) -> list[TrialRecord]:
        return [
            r
            for r in self.records
            if r.method == method and r.sigma == sigma and r.span == span
        ]

    def mean_errors(self, method: str, sigma: float, span: float):
        """(mean |dv|, mean |dw|, mean |dtheta| deg, n_ok, n_failed)."""
        recs = self.cell(method, sigma, span)
        ok = [r.abs_err for r in recs if not r.failed]
        n_failed = len(recs) - len(ok)
        if not ok:
            return (float("nan"), float("nan"), float("nan"), 0, n_failed)
        err = np.array(ok)
        means = err.mean(axis=0)
        return (float(means[0]), float(means[1]), float(means[2]), len(ok), n_failed)

    def summary_rows(self) -> list[dict]:
        rows = []
        for method in METHOD_ORDER:
            for sigma in self.config.sigmas:
                for span in self.config.spans:
                    if method not in methods_for_span(span):
                        continue
                    mv, mw, mt, n_ok, n_failed = self.mean_errors(method, sigma, span)
                    rows.append(
                        {
                            "method": method,
                            "sigma": sigma,
                            "delta_psi": span,
                            "trials": self.config.trials,
                            "n_ok": n_ok,
                            "n_failed": n_failed,
                            "mean_abs_err_v": mv,
                            "mean_abs_err_w": mw,
                            "mean_abs_err_theta_deg": mt,
                        }
                    )
        return rows

    def write_summary_csv(self, fp: IO[str]) -> None:
        fp.write(
            "method,sigma,delta_psi,trials,n_ok,n_failed,"
            "mean_abs_err_v,mean_abs_err_w,mean_abs_err_theta_deg\n"
        )
        for row in self.summary_rows():
            fp.write(
                "{method},{sigma:.9g},{delta_psi:.9g},{trials},{n_ok},{n_failed},"
                "{mean_abs_err_v:.9g},{mean_abs_err_w:.9g},"
                "{mean_abs_err_theta_deg:.9g}\n".format(**row)
            )

    def write_detail_json(self, fp: IO[str]) -> None:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "trials": [
                {
                    "method": r.method,
                    "sigma": r.sigma,
                    "delta_psi": r.span,
                    "trial": r.trial,
                    "true": dict(zip(("v", "w", "theta"), r.true)),
                    "est": None if r.est is None else dict(zip(("v", "w", "theta"), r.est)),
                    "abs_err": None
                    if r.abs_err is None
                    else dict(zip(("v", "w", "theta_deg"), r.abs_err)),
                    "failed": r.failed,
                    "reason": r.reason,
                }
                for r in self.records
            ],
        }
        json.dump(payload, fp, separators=(",", ":"))
        fp.write("\n")


def run(cfg: BenchConfig, progress: bool = False) -> BenchResult:
    """Execute the full grid. Deterministic for a fixed cfg.seed."""
    records: list[TrialRecord] = []
    for si, sigma in enumerate(cfg.sigmas):
        for di, span in enumerate(cfg.spans):
            if progress:
                print(
                    f"[bench] sigma={sigma:g} delta_psi={span:.4g} "
                    f"({cfg.trials} trials)",
                    file=sys.stderr,
                    flush=True,
                )
            methods = methods_for_span(span)
            for t in range(cfg.trials):
                seq = np.random.SeedSequence(cfg.seed, spawn_key=(si, di, t))
                rng = np.random.default_rng(seq)
                truth = sample_params(cfg.poly, rng)
                d = simulate(truth, cfg.n, span, sigma, seed=rng)
                d_vg = to_ground_speed(d)
                for method in methods:
                    try:
                        report = _run_method(method, d, d_vg, cfg.poly)
                    except FlowfitError as exc:
                        records.append(
                            TrialRecord(
                                method=method,
                                sigma=sigma,
                                span=span,
                                trial=t,
                                true=(truth.v, truth.w, truth.theta),
                                est=None,
                                abs_err=None,
                                failed=True,
                                reason=f"{type(exc).__name__}: {exc}",
                            )
                        )
                        continue
                    p = report.params
                    records.append(
                        TrialRecord(
                            method=method,
                            sigma=sigma,
                            span=span,
                            trial=t,
                            true=(truth.v, truth.w, truth.theta),
                            est=(p.v, p.w, p.theta),
                            abs_err=(
                                abs(p.v - truth.v),
                                abs(p.w - truth.w),
                                float(wrapped_abs_deg(p.theta, truth.theta)),
                            ),
                        )
                    )
    return BenchResult(config=cfg, records=records)
