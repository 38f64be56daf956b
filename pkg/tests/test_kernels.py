"""Backend equivalence: the numba kernels must match the numpy reference."""

import subprocess
import sys

import numpy as np
import numpy.testing as npt
import pytest

from flowfit import _kernels_numpy as knp

numba_impl = pytest.importorskip("flowfit._kernels_numba")

EPS = 1e-12


def _random_case(rng, n):
    vg = rng.uniform(0.0, 8.0, n)
    psi = rng.uniform(-7.0, 7.0, n)
    xd = rng.normal(0, 3, n)
    yd = rng.normal(0, 3, n)
    v = rng.uniform(0.5, 5.0)
    w = rng.uniform(0.0, v)
    theta = rng.uniform(0, 2 * np.pi)
    return vg, psi, xd, yd, v, w, theta


def test_xy_stats_agree():
    rng = np.random.default_rng(10)
    for n in (1, 7, 100, 1000):
        _, psi, xd, yd, *_ = _random_case(rng, n)
        npt.assert_allclose(
            numba_impl.xy_stats(xd, yd, psi), knp.xy_stats(xd, yd, psi), rtol=1e-12
        )


def test_residual_kernels_agree():
    rng = np.random.default_rng(11)
    for n in (1, 50, 500):
        vg, psi, xd, yd, v, w, theta = _random_case(rng, n)
        npt.assert_allclose(
            numba_impl.xy_residuals(xd, yd, psi, v, w, theta),
            knp.xy_residuals(xd, yd, psi, v, w, theta),
            rtol=1e-12,
        )
        npt.assert_allclose(
            numba_impl.vg_residuals(vg, psi, v, w, theta),
            knp.vg_residuals(vg, psi, v, w, theta),
            rtol=1e-12,
        )


def test_vg_cost_kernels_agree():
    rng = np.random.default_rng(12)
    for n in (1, 50, 500):
        vg, psi, _, _, v, w, theta = _random_case(rng, n)
        c_nb, ex_nb = numba_impl.vg_cost(vg, psi, v, w, theta, EPS)
        c_np, ex_np = knp.vg_cost(vg, psi, v, w, theta, EPS)
        assert ex_nb == ex_np
        npt.assert_allclose(c_nb, c_np, rtol=1e-12)


def test_vg_fused_kernels_agree():
    rng = np.random.default_rng(13)
    for n in (1, 50, 500):
        vg, psi, _, _, v, w, theta = _random_case(rng, n)
        c_nb, g_nb, h_nb, ex_nb = numba_impl.vg_cost_grad_hess(vg, psi, v, w, theta, EPS)
        c_np, g_np, h_np, ex_np = knp.vg_cost_grad_hess(vg, psi, v, w, theta, EPS)
        assert ex_nb == ex_np
        npt.assert_allclose(c_nb, c_np, rtol=1e-12)
        npt.assert_allclose(g_nb, g_np, rtol=1e-11, atol=1e-13)
        npt.assert_allclose(h_nb, h_np, rtol=1e-11, atol=1e-13)
        npt.assert_allclose(h_nb, h_nb.T)


def test_exclusion_agrees_in_singular_configuration():
    # w = v puts alpha exactly at zero where psi - theta = pi
    vg = np.array([1.0, 2.0])
    psi = np.array([np.pi, 0.0])
    for impl in (knp, numba_impl):
        cost, excluded = impl.vg_cost(vg, psi, 2.0, 2.0, 0.0, EPS)
        assert excluded == 1


def test_set_backend_rejects_unknown():
    from flowfit import kernels

    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_env_flag_selects_numpy_backend():
    code = (
        "import os; os.environ['FLOWFIT_BACKEND']='numpy'; "
        "from flowfit import kernels; print(kernels.active_backend())"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"
