import numpy as np
import numpy.testing as npt
import pytest

from flowfit import est_xy, model, optim
from flowfit.angles import TWO_PI


def _bowl(center, poly):
    c = np.asarray(center, dtype=float)
    return optim.OptProblem(
        cost=lambda x: 0.5 * float(np.sum((x - c) ** 2)),
        gradient=lambda x: x - c,
        hessian=lambda x: np.eye(3),
        constraints=poly,
    )


class TestStartPoints:
    def test_count_and_centroid(self, poly):
        pts = optim.start_points(poly)
        assert len(pts) == 9
        centroid = pts[-1]
        assert centroid.v == pytest.approx(2.75)
        assert centroid.w == pytest.approx(1.375)
        assert centroid.theta == pytest.approx(np.pi)

    def test_all_strictly_feasible(self, poly):
        for p in optim.start_points(poly):
            assert poly.margin(p.as_array()) > 0.0
            assert p.w <= p.v
            assert poly.v_min <= p.v <= poly.v_max

    def test_degenerate_polytope_rejected(self):
        with pytest.raises(ValueError):
            model.Polytope(5.0, 5.0)


class TestMinimize:
    def test_quadratic_bowl_from_every_start(self, poly):
        center = np.array([2.0, 1.0, 3.0])
        prob = _bowl(center, poly)
        for start in optim.start_points(poly):
            res = optim.minimize(prob, [start])
            npt.assert_allclose(res.params.as_array(), center, atol=1e-8)
            assert res.converged

    def test_noise_free_cost_reaches_zero(self, poly):
        truth = model.FlowParams(3.0, 1.0, np.pi / 2)
        d = model.simulate(truth, 100, TWO_PI, 0.0, seed=7)
        prob = est_xy.problem(d, poly)
        res = optim.minimize(prob, optim.start_points(poly))
        assert res.cost < 1e-12
        npt.assert_allclose(res.params.as_array(), truth.as_array(), atol=1e-7)

    def test_boundary_minimum(self, poly):
        # pull toward w > v; the solution must sit on the w = v face
        prob = _bowl([2.5, 3.0, np.pi], poly)
        res = optim.minimize(prob, optim.start_points(poly))
        x = res.params.as_array()
        assert abs(x[0] - x[1]) < 1e-6
        assert poly.margin(x) > -1e-8
        assert x[0] == pytest.approx(2.75, abs=1e-5)

    def test_cost_never_above_starts(self, poly):
        truth = model.FlowParams(2.0, 1.5, 4.0)
        d = model.simulate(truth, 60, TWO_PI, 0.2, seed=8)
        prob = est_xy.problem(d, poly)
        starts = optim.start_points(poly)
        res = optim.minimize(prob, starts)
        for s in starts:
            assert res.cost <= prob.cost(s.as_array()) + 1e-12

    def test_feasibility_of_result(self, poly):
        G, h = poly.constraint_matrix()
        rng = np.random.default_rng(3)
        for _ in range(10):
            truth = model.FlowParams(
                rng.uniform(1, 4), rng.uniform(0.1, 0.9), rng.uniform(0, TWO_PI)
            )
            d = model.simulate(truth, 50, TWO_PI, 0.3, seed=int(rng.integers(2**31)))
            res = optim.minimize(est_xy.problem(d, poly), optim.start_points(poly))
            assert np.all(G @ res.params.as_array() - h <= 1e-8)

    def test_infeasible_start_rejected(self, poly):
        prob = _bowl([2.0, 1.0, 3.0], poly)
        with pytest.raises(ValueError):
            optim.minimize(prob, [(6.0, 1.0, 3.0)])

    def test_empty_starts_rejected(self, poly):
        with pytest.raises(ValueError):
            optim.minimize(_bowl([2, 1, 3], poly), [])

    def test_tie_breaks_to_first_start(self, poly):
        prob = _bowl([2.75, 1.0, np.pi], poly)
        starts = [(2.0, 0.5, 3.0), (3.5, 1.5, 3.3)]
        res = optim.minimize(prob, starts)
        assert res.start_point.v == pytest.approx(2.0)


class TestPolytope:
    def test_constraint_rows(self, poly):
        G, h = poly.constraint_matrix()
        assert G.shape == (6, 3) and h.shape == (6,)
        # interior point satisfies all rows strictly
        assert poly.margin([2.0, 1.0, 3.0]) > 0
        # each face violated by points just outside
        assert poly.margin([0.4, 0.1, 3.0]) < 0      # v below v_min
        assert poly.margin([5.1, 0.1, 3.0]) < 0      # v above v_max
        assert poly.margin([2.0, -0.01, 3.0]) < 0    # w negative
        assert poly.margin([2.0, 2.1, 3.0]) < 0      # w above v
        assert poly.margin([2.0, 1.0, -0.01]) < 0    # theta below 0
        assert poly.margin([2.0, 1.0, TWO_PI + 0.01]) < 0
