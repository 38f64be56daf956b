"""numba @njit implementations of the hot reduction kernels.

Loop forms of the functions in :mod:`flowfit._kernels_numpy`. Importing this
module requires numba; callers go through :mod:`flowfit.kernels`.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def xy_stats(xdot, ydot, psi):
    k1 = 0.0
    k2 = 0.0
    k3 = 0.0
    k4 = 0.0
    k5 = 0.0
    k6 = 0.0
    k7 = 0.0
    k8 = 0.0
    for i in range(psi.shape[0]):
        c = math.cos(psi[i])
        s = math.sin(psi[i])
        k1 += xdot[i]
        k2 += ydot[i]
        k3 += xdot[i] * xdot[i]
        k4 += ydot[i] * ydot[i]
        k5 += c
        k6 += s
        k7 += xdot[i] * c
        k8 += ydot[i] * s
    return k1, k2, k3, k4, k5, k6, k7, k8


@njit(cache=True)
def xy_residuals(xdot, ydot, psi, v, w, theta):
    n = psi.shape[0]
    out = np.empty(n)
    wx = w * math.cos(theta)
    wy = w * math.sin(theta)
    for i in range(n):
        rx = xdot[i] - (v * math.cos(psi[i]) + wx)
        ry = ydot[i] - (v * math.sin(psi[i]) + wy)
        out[i] = math.hypot(rx, ry)
    return out


@njit(cache=True)
def vg_residuals(vg, psi, v, w, theta):
    n = psi.shape[0]
    out = np.empty(n)
    for i in range(n):
        alpha = v * v + 2.0 * v * w * math.cos(psi[i] - theta) + w * w
        if alpha < 0.0:
            alpha = 0.0
        out[i] = abs(vg[i] - math.sqrt(alpha))
    return out


@njit(cache=True)
def vg_cost(vg, psi, v, w, theta, eps):
    cost = 0.0
    n_excluded = 0
    for i in range(psi.shape[0]):
        alpha = v * v + 2.0 * v * w * math.cos(psi[i] - theta) + w * w
        if alpha <= eps:
            n_excluded += 1
            continue
        r = vg[i] - math.sqrt(alpha)
        cost += 0.5 * r * r
    return cost, n_excluded


@njit(cache=True)
def vg_cost_grad_hess(vg, psi, v, w, theta, eps):
    cost = 0.0
    g0 = 0.0
    g1 = 0.0
    g2 = 0.0
    h00 = 0.0
    h01 = 0.0
    h02 = 0.0
    h11 = 0.0
    h12 = 0.0
    h22 = 0.0
    n_excluded = 0
    for i in range(psi.shape[0]):
        c = math.cos(psi[i] - theta)
        s = math.sin(psi[i] - theta)
        alpha = v * v + 2.0 * v * w * c + w * w
        if alpha <= eps:
            n_excluded += 1
            continue
        q = math.sqrt(alpha)
        r = vg[i] - q

        av = v + w * c
        aw = w + v * c
        at = v * w * s
        q_v = av / q
        q_w = aw / q
        q_t = at / q

        cost += 0.5 * r * r
        g0 -= r * q_v
        g1 -= r * q_w
        g2 -= r * q_t

        q3 = q * q * q
        q_vv = 1.0 / q - av * av / q3
        q_vw = c / q - av * aw / q3
        q_vt = w * s / q - av * at / q3
        q_ww = 1.0 / q - aw * aw / q3
        q_wt = v * s / q - aw * at / q3
        q_tt = -v * w * c / q - at * at / q3

        h00 += q_v * q_v - r * q_vv
        h01 += q_v * q_w - r * q_vw
        h02 += q_v * q_t - r * q_vt
        h11 += q_w * q_w - r * q_ww
        h12 += q_w * q_t - r * q_wt
        h22 += q_t * q_t - r * q_tt

    grad = np.array([g0, g1, g2])
    hess = np.array([[h00, h01, h02], [h01, h11, h12], [h02, h12, h22]])
    return cost, grad, hess, n_excluded
