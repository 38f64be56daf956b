"""Domain types, the kinematic forward model, and synthetic data generation.

The motion model is a planar velocity triangle: a vehicle moving at constant
flow-relative speed ``v`` with heading ``psi`` through a steady uniform
current of magnitude ``w`` and direction ``theta`` has ground velocity

    xdot = v cos(psi) + w cos(theta)
    ydot = v sin(psi) + w sin(theta)

Every estimator in this package inverts that relation from noisy logs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .angles import TWO_PI, wrap_to_2pi
from .errors import InsufficientDataError

KIND_VELOCITY = "velocity"
KIND_GROUND_SPEED = "ground_speed"


@dataclass(frozen=True)
class FlowParams:
    """Parameter triple: flow-relative speed, current magnitude, current direction.

    Invariants enforced at construction: ``v > 0``, ``0 <= w <= v`` (the
    well-posedness assumption), ``theta`` normalized to [0, 2pi).
    """

    v: float
    w: float
    theta: float

    def __post_init__(self):
        v = float(self.v)
        w = float(self.w)
        theta = float(self.theta)
        if not np.isfinite(v) or not np.isfinite(w) or not np.isfinite(theta):
            raise ValueError("flow parameters must be finite")
        if v <= 0.0:
            raise ValueError(f"flow-relative speed must be positive, got {v}")
        if w < 0.0:
            raise ValueError(f"current magnitude must be nonnegative, got {w}")
        if w > v:
            raise ValueError(f"current magnitude w={w} exceeds vehicle speed v={v}")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "theta", float(wrap_to_2pi(theta)))

    @property
    def w_x(self) -> float:
        """East component of the current velocity."""
        return self.w * np.cos(self.theta)

    @property
    def w_y(self) -> float:
        """North component of the current velocity."""
        return self.w * np.sin(self.theta)

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.w, self.theta], dtype=float)


def param_triple(p) -> tuple[float, float, float]:
    """Accept a FlowParams or any (v, w, theta) triple and return floats."""
    if isinstance(p, FlowParams):
        return p.v, p.w, p.theta
    v, w, theta = p
    return float(v), float(w), float(theta)


@dataclass(frozen=True)
class VelSample:
    """One ground-velocity measurement with the heading it was taken at."""

    xdot: float
    ydot: float
    psi: float


@dataclass(frozen=True)
class GroundSpeedSample:
    """One ground-speed magnitude measurement with its heading."""

    vg: float
    psi: float


@dataclass(frozen=True)
class DatasetMeta:
    """Provenance of a synthetic dataset; carried through transformations."""

    params: FlowParams | None = None
    sigma: float | None = None
    sigma_psi: float | None = None
    delta_psi: float | None = None
    psi0: float | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        out = {}
        if self.params is not None:
            out.update(v=self.params.v, w=self.params.w, theta=self.params.theta)
        for name in ("sigma", "sigma_psi", "delta_psi", "psi0", "seed"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def _column(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite values in column {name!r}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """Ordered, homogeneous collection of measurements.

    Stored columnar for the numeric kernels; ``samples()`` yields record
    objects when per-sample access is more convenient. Arrays are read-only
    after construction.
    """

    kind: str
    psi: np.ndarray
    xdot: np.ndarray | None = None
    ydot: np.ndarray | None = None
    vg: np.ndarray | None = None
    meta: DatasetMeta | None = None

    def __post_init__(self):
        if self.kind not in (KIND_VELOCITY, KIND_GROUND_SPEED):
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        psi = _column(self.psi, "psi")
        object.__setattr__(self, "psi", psi)
        if self.kind == KIND_VELOCITY:
            if self.xdot is None or self.ydot is None:
                raise ValueError("velocity dataset needs xdot and ydot columns")
            xdot = _column(self.xdot, "xdot")
            ydot = _column(self.ydot, "ydot")
            if not (len(xdot) == len(ydot) == len(psi)):
                raise ValueError("column lengths differ")
            object.__setattr__(self, "xdot", xdot)
            object.__setattr__(self, "ydot", ydot)
        else:
            if self.vg is None:
                raise ValueError("ground-speed dataset needs a vg column")
            vg = _column(self.vg, "vg")
            if len(vg) != len(psi):
                raise ValueError("column lengths differ")
            if vg.size and np.min(vg) < 0.0:
                raise ValueError("ground speed must be nonnegative")
            object.__setattr__(self, "vg", vg)

    @classmethod
    def velocity(cls, xdot, ydot, psi, meta: DatasetMeta | None = None) -> "Dataset":
        return cls(kind=KIND_VELOCITY, psi=psi, xdot=xdot, ydot=ydot, meta=meta)

    @classmethod
    def ground_speed(cls, vg, psi, meta: DatasetMeta | None = None) -> "Dataset":
        return cls(kind=KIND_GROUND_SPEED, psi=psi, vg=vg, meta=meta)

    @property
    def n(self) -> int:
        return int(self.psi.size)

    def __len__(self) -> int:
        return self.n

    def samples(self) -> Iterator[VelSample | GroundSpeedSample]:
        if self.kind == KIND_VELOCITY:
            for x, y, p in zip(self.xdot, self.ydot, self.psi):
                yield VelSample(float(x), float(y), float(p))
        else:
            for g, p in zip(self.vg, self.psi):
                yield GroundSpeedSample(float(g), float(p))

    def select(self, index) -> "Dataset":
        """Subset by boolean mask or integer index array; meta is carried."""
        idx = np.asarray(index)
        if self.kind == KIND_VELOCITY:
            return Dataset.velocity(
                self.xdot[idx], self.ydot[idx], self.psi[idx], meta=self.meta
            )
        return Dataset.ground_speed(self.vg[idx], self.psi[idx], meta=self.meta)

    def require(self, kind: str, min_samples: int = 1) -> None:
        """Raise unless this dataset has the given kind and enough samples."""
        if self.kind != kind:
            raise ValueError(f"expected a {kind} dataset, got {self.kind}")
        if self.n < min_samples:
            raise InsufficientDataError(
                f"need at least {min_samples} samples, got {self.n}"
            )


@dataclass(frozen=True)
class Polytope:
    """Feasible region for (v, w, theta): v in [v_min, v_max], 0 <= w <= v,
    0 <= theta <= 2pi, expressed as six linear inequality rows G x <= h."""

    v_min: float
    v_max: float

    def __post_init__(self):
        if not (0.0 < self.v_min < self.v_max):
            raise ValueError(
                f"need 0 < v_min < v_max, got v_min={self.v_min}, v_max={self.v_max}"
            )

    def constraint_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Rows: v >= v_min, v <= v_max, w >= 0, w <= v, theta >= 0, theta <= 2pi."""
        G = np.array(
            [
                [-1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, -1.0, 0.0],
                [-1.0, 1.0, 0.0],
                [0.0, 0.0, -1.0],
                [0.0, 0.0, 1.0],
            ]
        )
        h = np.array([-self.v_min, self.v_max, 0.0, 0.0, 0.0, TWO_PI])
        return G, h

    def margin(self, x) -> float:
        """Smallest slack h - Gx; positive iff x is strictly feasible."""
        G, h = self.constraint_matrix()
        return float(np.min(h - G @ np.asarray(x, dtype=float)))

    def contains(self, x, tol: float = 0.0) -> bool:
        return self.margin(x) >= -tol


@dataclass(frozen=True)
class EstimateReport:
    """Output of any estimator: the recovered parameters plus diagnostics."""

    method: str
    params: FlowParams
    cost: float
    n_used: int
    n_excluded: int = 0
    converged: bool = True
    iterations: int = 0
    inlier_mask: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def inlier_fraction(self) -> float | None:
        if self.inlier_mask is None:
            return None
        return float(np.count_nonzero(self.inlier_mask) / self.inlier_mask.size)


def forward_velocity(params, psi):
    """Ground-velocity components at heading(s) ``psi``.

    Returns a pair of floats for scalar input, a pair of arrays otherwise.
    """
    v, w, theta = param_triple(params)
    psi = np.asarray(psi, dtype=float)
    xdot = v * np.cos(psi) + w * np.cos(theta)
    ydot = v * np.sin(psi) + w * np.sin(theta)
    if psi.ndim == 0:
        return float(xdot), float(ydot)
    return xdot, ydot


def forward_ground_speed(params, psi):
    """Ground-speed magnitude sqrt(v^2 + w^2 + 2 v w cos(theta - psi)).

    Equal to the norm of :func:`forward_velocity` at the same heading. Peaks
    at v + w when the heading is aligned with the current (psi = theta) and
    bottoms out at v - w when opposed.
    """
    v, w, theta = param_triple(params)
    psi = np.asarray(psi, dtype=float)
    arg = v * v + w * w + 2.0 * v * w * np.cos(theta - psi)
    out = np.sqrt(np.maximum(arg, 0.0))
    if psi.ndim == 0:
        return float(out)
    return out


def simulate(
    params,
    n: int,
    delta_psi: float,
    sigma: float,
    sigma_psi: float = 0.0,
    *,
    psi0: float = 0.0,
    seed=None,
) -> Dataset:
    """Generate a noisy velocity dataset for a heading-change maneuver.

    Headings are equally spaced over [psi0, psi0 + delta_psi] (a constant
    turn-rate orbit). Velocity components get independent zero-mean Gaussian
    noise with std ``sigma``; reported headings get independent noise with
    std ``sigma_psi`` (default 0). Deterministic for a fixed integer seed.

    Parameters
    ----------
    params : FlowParams or (v, w, theta)
    n : number of samples, at least 3
    delta_psi : heading span in radians, in (0, 2pi]
    sigma : velocity noise std in m/s, >= 0
    sigma_psi : heading noise std in radians, >= 0
    psi0 : initial heading
    seed : int, numpy Generator, or None
    """
    v, w, theta = param_triple(params)
    if n < 3:
        raise ValueError(f"need n >= 3 samples, got {n}")
    # Tolerate rounded full-revolution inputs like 6.2832.
    if TWO_PI < delta_psi <= TWO_PI * (1.0 + 1e-4):
        delta_psi = TWO_PI
    if not (0.0 < delta_psi <= TWO_PI):
        raise ValueError(f"heading span must be in (0, 2pi], got {delta_psi}")
    if sigma < 0.0 or sigma_psi < 0.0:
        raise ValueError("noise levels must be nonnegative")

    rng = np.random.default_rng(seed)
    psi_true = psi0 + np.linspace(0.0, delta_psi, n)
    xdot, ydot = forward_velocity((v, w, theta), psi_true)
    xdot = xdot + rng.normal(0.0, sigma, n)
    ydot = ydot + rng.normal(0.0, sigma, n)
    psi_meas = psi_true + rng.normal(0.0, sigma_psi, n)

    meta = DatasetMeta(
        params=FlowParams(v, w, theta),
        sigma=sigma,
        sigma_psi=sigma_psi,
        delta_psi=delta_psi,
        psi0=psi0,
        seed=seed if isinstance(seed, int) else None,
    )
    return Dataset.velocity(xdot, ydot, psi_meas, meta=meta)


def to_ground_speed(d: Dataset) -> Dataset:
    """Collapse velocity components to ground-speed magnitudes, keeping psi."""
    d.require(KIND_VELOCITY, min_samples=0)
    vg = np.hypot(d.xdot, d.ydot)
    return Dataset.ground_speed(vg, d.psi, meta=d.meta)
