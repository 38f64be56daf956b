"""Backend selection for the hot numeric kernels.

Two interchangeable implementations exist: numba @njit loops
(:mod:`flowfit._kernels_numba`) and pure vectorized numpy
(:mod:`flowfit._kernels_numpy`). The default is numba when importable,
numpy otherwise. Set the environment variable ``FLOWFIT_BACKEND`` to
``numba`` or ``numpy`` before import to force one; ``set_backend`` switches
at runtime (used by the backend benchmark and the equivalence tests).

Estimator modules call through this module (``kernels.vg_cost(...)``) so a
switch takes effect everywhere at once.
"""

import os

from . import _kernels_numpy

_ENV_VAR = "FLOWFIT_BACKEND"
_active = "numpy"

# Rebound by set_backend below.
xy_stats = _kernels_numpy.xy_stats
xy_residuals = _kernels_numpy.xy_residuals
vg_residuals = _kernels_numpy.vg_residuals
vg_cost = _kernels_numpy.vg_cost
vg_cost_grad_hess = _kernels_numpy.vg_cost_grad_hess

_KERNEL_NAMES = (
    "xy_stats",
    "xy_residuals",
    "vg_residuals",
    "vg_cost",
    "vg_cost_grad_hess",
)


def _load_numba_impl():
    from . import _kernels_numba

    return _kernels_numba


def set_backend(name: str) -> str:
    """Activate the named backend ("numba" or "numpy"); returns the name."""
    global _active
    if name == "numpy":
        impl = _kernels_numpy
    elif name == "numba":
        impl = _load_numba_impl()
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    g = globals()
    for fn in _KERNEL_NAMES:
        g[fn] = getattr(impl, fn)
    _active = name
    return _active


def active_backend() -> str:
    return _active


def _initial_backend() -> str:
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice in ("numba", "numpy"):
        return set_backend(choice)
    if choice:
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}")
    try:
        return set_backend("numba")
    except ImportError:
        return set_backend("numpy")


_initial_backend()
