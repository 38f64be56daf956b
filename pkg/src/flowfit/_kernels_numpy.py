"""Vectorized numpy implementations of the per-sample reduction kernels.

These are the reference implementations; the numba backend must agree with
them to floating-point roundoff. See :mod:`flowfit.kernels` for selection.
"""

import numpy as np


def xy_stats(xdot, ydot, psi):
    """Eight data sums for the component-velocity cost, one pass."""
    c = np.cos(psi)
    s = np.sin(psi)
    return (
        float(np.sum(xdot)),
        float(np.sum(ydot)),
        float(np.sum(xdot * xdot)),
        float(np.sum(ydot * ydot)),
        float(np.sum(c)),
        float(np.sum(s)),
        float(np.sum(xdot * c)),
        float(np.sum(ydot * s)),
    )


def xy_residuals(xdot, ydot, psi, v, w, theta):
    """Per-sample Euclidean distance between measured and predicted velocity."""
    rx = xdot - (v * np.cos(psi) + w * np.cos(theta))
    ry = ydot - (v * np.sin(psi) + w * np.sin(theta))
    return np.hypot(rx, ry)


def vg_residuals(vg, psi, v, w, theta):
    """Per-sample |vg - predicted ground speed|."""
    alpha = v * v + 2.0 * v * w * np.cos(psi - theta) + w * w
    return np.abs(vg - np.sqrt(np.maximum(alpha, 0.0)))


def vg_cost(vg, psi, v, w, theta, eps):
    """Half sum of squared ground-speed residuals.

    Samples whose speed-squared term alpha_i falls at or below ``eps`` are
    excluded (the model slope is singular there). Returns (cost, n_excluded).
    """
    alpha = v * v + 2.0 * v * w * np.cos(psi - theta) + w * w
    keep = alpha > eps
    r = vg[keep] - np.sqrt(alpha[keep])
    cost = 0.5 * float(np.sum(r * r))
    return cost, int(alpha.size - np.count_nonzero(keep))


def vg_cost_grad_hess(vg, psi, v, w, theta, eps):
    """Cost, gradient, and Hessian of the ground-speed cost in one pass.

    Derivatives are of the implemented half-sum-of-squares cost. With
    q = sqrt(alpha) and residual r = vg - q:

        grad = -sum r * dq,   hess = sum (dq dq^T - r * d2q)

    Returns (cost, grad(3,), hess(3,3), n_excluded).
    """
    c = np.cos(psi - theta)
    s = np.sin(psi - theta)
    alpha = v * v + 2.0 * v * w * c + w * w
    keep = alpha > eps
    n_excluded = int(alpha.size - np.count_nonzero(keep))
    c = c[keep]
    s = s[keep]
    q = np.sqrt(alpha[keep])
    r = vg[keep] - q

    q_v = (v + w * c) / q
    q_w = (w + v * c) / q
    q_t = v * w * s / q

    cost = 0.5 * float(np.sum(r * r))
    grad = np.array(
        [
            -float(np.sum(r * q_v)),
            -float(np.sum(r * q_w)),
            -float(np.sum(r * q_t)),
        ]
    )

    # Second derivatives of q = sqrt(alpha).
    q3 = q * q * q
    q_vv = 1.0 / q - (v + w * c) ** 2 / q3
    q_vw = c / q - (v + w * c) * (w + v * c) / q3
    q_vt = w * s / q - (v + w * c) * (v * w * s) / q3
    q_ww = 1.0 / q - (w + v * c) ** 2 / q3
    q_wt = v * s / q - (w + v * c) * (v * w * s) / q3
    q_tt = -v * w * c / q - (v * w * s) ** 2 / q3

    h_vv = float(np.sum(q_v * q_v - r * q_vv))
    h_vw = float(np.sum(q_v * q_w - r * q_vw))
    h_vt = float(np.sum(q_v * q_t - r * q_vt))
    h_ww = float(np.sum(q_w * q_w - r * q_ww))
    h_wt = float(np.sum(q_w * q_t - r * q_wt))
    h_tt = float(np.sum(q_t * q_t - r * q_tt))
    hess = np.array([[h_vv, h_vw, h_vt], [h_vw, h_ww, h_wt], [h_vt, h_wt, h_tt]])
    return cost, grad, hess, n_excluded
