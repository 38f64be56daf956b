"""Angle wrapping helpers.

All angle comparisons in this package use the shortest signed difference
``atan2(sin(a - b), cos(a - b))`` so that values near the 0/2pi seam compare
correctly.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_to_2pi(angle):
    """Wrap an angle (scalar or array) into [0, 2pi)."""
    return np.mod(angle, TWO_PI)


def wrapped_diff(a, b):
    """Shortest signed angular difference a - b, in (-pi, pi]."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    out = np.arctan2(np.sin(d), np.cos(d))
    if np.ndim(out) == 0:
        return float(out)
    return out


def wrapped_abs_deg(a, b):
    """Absolute wrapped difference in degrees, always in [0, 180]."""
    return np.abs(np.degrees(wrapped_diff(a, b)))
