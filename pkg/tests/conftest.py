import numpy as np
import pytest

from flowfit import est_vg, kernels, model


@pytest.fixture(scope="session")
def poly():
    return model.Polytope(0.5, 5.0)


@pytest.fixture(scope="session")
def warm_kernels():
    """Trigger any jit compilation before timed tests."""
    d = model.to_ground_speed(
        model.simulate(model.FlowParams(3.0, 1.0, 1.0), 10, 2 * np.pi, 0.0, seed=0)
    )
    kernels.vg_cost(d.vg, d.psi, 3.0, 1.0, 1.0, est_vg.ALPHA_EPS)
    kernels.vg_cost_grad_hess(d.vg, d.psi, 3.0, 1.0, 1.0, est_vg.ALPHA_EPS)
    kernels.xy_stats(d.psi, d.psi, d.psi)
    kernels.xy_residuals(d.psi, d.psi, d.psi, 3.0, 1.0, 1.0)
    kernels.vg_residuals(d.vg, d.psi, 3.0, 1.0, 1.0)
    return kernels.active_backend()
