import math

import numpy as np
import numpy.testing as npt
import pytest

from flowfit import model
from flowfit.angles import TWO_PI, wrap_to_2pi, wrapped_diff
from flowfit.errors import InsufficientDataError

from oracles import direct_vg_curve


class TestFlowParams:
    def test_theta_normalized(self):
        p = model.FlowParams(3.0, 1.0, -np.pi / 2)
        assert 0.0 <= p.theta < TWO_PI
        assert p.theta == pytest.approx(1.5 * np.pi)

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            model.FlowParams(0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            model.FlowParams(3.0, -0.1, 0.0)
        with pytest.raises(ValueError):
            model.FlowParams(3.0, 3.1, 0.0)
        with pytest.raises(ValueError):
            model.FlowParams(3.0, np.nan, 0.0)

    def test_current_components(self):
        p = model.FlowParams(3.0, 2.0, np.pi)
        assert p.w_x == pytest.approx(-2.0)
        assert p.w_y == pytest.approx(0.0, abs=1e-15)


class TestForwardModel:
    def test_axis_aligned(self):
        assert model.forward_velocity(model.FlowParams(3, 1, np.pi / 2), 0.0) == (
            pytest.approx(3.0),
            pytest.approx(1.0),
        )

    def test_zero_current(self):
        xd, yd = model.forward_velocity(model.FlowParams(1, 0, 2.3), np.pi / 4)
        assert xd == pytest.approx(math.sqrt(2) / 2)
        assert yd == pytest.approx(math.sqrt(2) / 2)

    def test_against_scalar_evaluation(self):
        # independent scalar evaluation of the kinematics
        v, w, theta, psi = 2.0, 0.5, np.pi / 4, np.pi
        expect_x = v * math.cos(psi) + w * math.cos(theta)
        expect_y = v * math.sin(psi) + w * math.sin(theta)
        xd, yd = model.forward_velocity((v, w, theta), psi)
        assert xd == pytest.approx(expect_x, abs=1e-15)
        assert yd == pytest.approx(expect_y, abs=1e-15)
        assert xd == pytest.approx(-2.0 + 0.5 * math.sqrt(2) / 2)
        assert yd == pytest.approx(0.5 * math.sqrt(2) / 2)

    def test_ground_speed_extremes(self):
        p = model.FlowParams(3, 1, np.pi / 2)
        assert model.forward_ground_speed(p, np.pi / 2) == pytest.approx(4.0)
        assert model.forward_ground_speed(p, 1.5 * np.pi) == pytest.approx(2.0)

    def test_ground_speed_zero_current(self):
        p = model.FlowParams(2.7, 0.0, 1.0)
        for psi in np.linspace(0, TWO_PI, 17):
            assert model.forward_ground_speed(p, psi) == pytest.approx(2.7)

    def test_ground_speed_is_velocity_norm(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            v = rng.uniform(0.1, 6.0)
            w = rng.uniform(0.0, v)
            theta = rng.uniform(-10, 10)
            psi = rng.uniform(-10, 10)
            xd, yd = model.forward_velocity((v, w, theta), psi)
            assert abs(
                model.forward_ground_speed((v, w, theta), psi) - math.hypot(xd, yd)
            ) < 1e-12

    def test_extrema_locations_dense_grid(self):
        p = model.FlowParams(2.5, 0.9, 4.0)
        grid = np.linspace(0, TWO_PI, 100_000, endpoint=False)
        curve = model.forward_ground_speed(p, grid)
        assert abs(wrapped_diff(grid[np.argmax(curve)], p.theta)) < 1e-4
        assert abs(wrapped_diff(grid[np.argmin(curve)], p.theta + np.pi)) < 1e-4
        assert curve.max() == pytest.approx(p.v + p.w, abs=1e-8)
        assert curve.min() == pytest.approx(p.v - p.w, abs=1e-8)


class TestSimulate:
    def test_noise_free_on_manifold(self):
        p = model.FlowParams(3, 1, np.pi / 2)
        d = model.simulate(p, 100, TWO_PI, 0.0, seed=1)
        xd, yd = model.forward_velocity(p, d.psi)
        npt.assert_array_equal(d.xdot, xd)
        npt.assert_array_equal(d.ydot, yd)

    def test_same_seed_bit_identical(self):
        p = model.FlowParams(3, 1, 0.3)
        a = model.simulate(p, 50, TWO_PI, 0.1, 0.01, seed=42)
        b = model.simulate(p, 50, TWO_PI, 0.1, 0.01, seed=42)
        npt.assert_array_equal(a.xdot, b.xdot)
        npt.assert_array_equal(a.ydot, b.ydot)
        npt.assert_array_equal(a.psi, b.psi)

    def test_heading_spacing(self):
        d = model.simulate((2, 0.5, 0), 5, np.pi, 0.0, seed=0, psi0=1.0)
        npt.assert_allclose(d.psi, 1.0 + np.linspace(0, np.pi, 5), atol=1e-15)

    def test_argument_validation(self):
        p = model.FlowParams(3, 1, 0)
        with pytest.raises(ValueError):
            model.simulate(p, 2, TWO_PI, 0.1)
        with pytest.raises(ValueError):
            model.simulate(p, 10, 0.0, 0.1)
        with pytest.raises(ValueError):
            model.simulate(p, 10, 7.0, 0.1)
        with pytest.raises(ValueError):
            model.simulate(p, 10, TWO_PI, -0.1)

    def test_rounded_full_revolution_accepted(self):
        d = model.simulate((3, 1, 0), 10, 6.2832, 0.0, seed=1)
        assert d.psi[-1] == pytest.approx(TWO_PI)

    def test_meta_recorded(self):
        p = model.FlowParams(3, 1, 0.2)
        d = model.simulate(p, 10, np.pi, 0.05, seed=9)
        assert d.meta.params == p
        assert d.meta.sigma == 0.05
        assert d.meta.seed == 9


class TestGroundSpeedTransform:
    def test_norm(self):
        d = model.Dataset.velocity([3.0], [1.0], [0.0])
        g = model.to_ground_speed(d)
        assert g.vg[0] == pytest.approx(math.sqrt(10))
        assert g.psi[0] == 0.0

    def test_noise_free_sweep_matches_curve(self):
        p = model.FlowParams(3, 1, np.pi / 2)
        d = model.simulate(p, 400, TWO_PI, 0.0, seed=3)
        g = model.to_ground_speed(d)
        npt.assert_allclose(g.vg, direct_vg_curve(p.v, p.w, p.theta, g.psi), atol=1e-12)
        assert g.vg.max() == pytest.approx(4.0, abs=1e-3)

    def test_preserves_count_and_meta(self):
        d = model.simulate((2, 1, 1), 37, np.pi, 0.1, seed=5)
        g = model.to_ground_speed(d)
        assert g.n == 37
        assert g.meta == d.meta


class TestDataset:
    def test_kind_checks(self):
        d = model.Dataset.velocity([1.0], [2.0], [0.0])
        with pytest.raises(ValueError):
            d.require(model.KIND_GROUND_SPEED)
        with pytest.raises(InsufficientDataError):
            d.require(model.KIND_VELOCITY, min_samples=3)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            model.Dataset.velocity([1.0, np.nan], [0.0, 0.0], [0.0, 1.0])

    def test_immutable_columns(self):
        d = model.Dataset.velocity([1.0], [2.0], [0.0])
        with pytest.raises(ValueError):
            d.xdot[0] = 5.0

    def test_select_mask(self):
        d = model.Dataset.velocity([1.0, 2.0, 3.0], [0.0, 0.0, 0.0], [0.1, 0.2, 0.3])
        sub = d.select(np.array([True, False, True]))
        npt.assert_array_equal(sub.xdot, [1.0, 3.0])

    def test_samples_records(self):
        d = model.Dataset.ground_speed([1.5, 2.5], [0.0, 1.0])
        recs = list(d.samples())
        assert recs[0] == model.GroundSpeedSample(1.5, 0.0)


class TestAngles:
    def test_wrapped_diff_convention(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            a, b = rng.uniform(-20, 20, 2)
            expect = math.atan2(math.sin(a - b), math.cos(a - b))
            assert wrapped_diff(a, b) == pytest.approx(expect, abs=1e-14)

    def test_wrap_to_2pi_range(self):
        vals = wrap_to_2pi(np.linspace(-30, 30, 1000))
        assert np.all(vals >= 0) and np.all(vals < TWO_PI)
