import itertools

import numpy as np
import pytest
from scipy.optimize import minimize

from lvess import (GeneralizedModel, HypothesisViolation, LotkaVolterraModel, NotStationary,
                   Saturating, TooManySubsets, classify_stationary_point, embed_lotka_volterra,
                   enumerate_stationary_points, find_ess_by_enumeration, growth_rates,
                   lyapunov_value, solve_ess, verify_ess)
from lvess.corpus import random_saturating_model, random_symmetrizable_lv
from lvess.equilibrium import StationaryPoint, start_point
from lvess.lyapunov import lyapunov_gradient


def lv_supports_oracle(lv):
    """Stationary points of a Lotka-Volterra system by per-support linear solves."""
    out = []
    for size in range(lv.N + 1):
        for I in itertools.combinations(range(lv.N), size):
            n = np.zeros(lv.N)
            if I:
                n[list(I)] = np.linalg.solve(lv.b[np.ix_(I, I)], lv.r[list(I)])
                if np.any(n[list(I)] <= 0):
                    continue
            out.append((I, n))
    return out


class TestSolveEss:
    def test_interior(self, sym2):
        res = solve_ess(sym2)
        np.testing.assert_allclose(res.n, [1 / 3, 1 / 3], atol=1e-12)
        assert res.support == (0, 1)
        assert res.method == "active_set_newton"

    def test_boundary(self, boundary2):
        res = solve_ess(boundary2)
        np.testing.assert_allclose(res.n, [1, 0], atol=1e-10)
        assert res.n[1] == 0.0
        assert res.support == (0,)
        np.testing.assert_allclose(res.inequality_margins, [0.4], atol=1e-10)

    def test_logistic(self, logistic):
        np.testing.assert_allclose(solve_ess(logistic).n, [0.5], atol=1e-12)

    def test_projected_gradient_optimality(self, rng):
        for _ in range(20):
            model = embed_lotka_volterra(random_symmetrizable_lv(rng, int(rng.integers(1, 7)))).model
            res = solve_ess(model, tol=1e-10)
            grad = lyapunov_gradient(model, res.n)
            on = res.n > 0
            assert np.all(np.abs(grad[on]) <= 1e-10)
            assert np.all(grad[~on] >= -1e-10)

    def test_refuses_hypothesis_violation(self):
        gm = GeneralizedModel.from_kernel([1.2, 0.5], [[1.0], [1.0]], [1.0], response=Saturating(1.0))
        with pytest.raises(HypothesisViolation):
            solve_ess(gm)

    def test_all_rates_nonpositive_gives_zero(self):
        gm = embed_lotka_volterra(LotkaVolterraModel([-1.0, -0.5], [[1, 0], [0, 1.0]])).model
        with pytest.warns(RuntimeWarning):
            res = solve_ess(gm)
        np.testing.assert_array_equal(res.n, [0, 0])

    def test_saturating_matches_bounded_minimizer(self, rng):
        # independent oracle: L-BFGS-B on F over the orthant
        for _ in range(10):
            model = random_saturating_model(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
            res = solve_ess(model)
            opt = minimize(lambda x: lyapunov_value(model, np.maximum(x, 0)), start_point(model),
                           jac=lambda x: lyapunov_gradient(model, np.maximum(x, 0)),
                           bounds=[(0, None)] * model.N, method="L-BFGS-B",
                           options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 10000})
            assert res.F_value <= opt.fun + 1e-10
            np.testing.assert_allclose(res.n, opt.x, atol=1e-5)
            assert verify_ess(model, res.n).ok


class TestVerifyEss:
    def test_examples(self, sym2, boundary2):
        assert verify_ess(sym2, [1 / 3, 1 / 3]).ok
        assert verify_ess(boundary2, [1, 0]).ok
        check = verify_ess(sym2, [0, 0])
        assert not check.ok
        np.testing.assert_allclose(check.margins, [-1, -1])

    def test_margin_reported(self, boundary2):
        np.testing.assert_allclose(verify_ess(boundary2, [1, 0]).margins, [0.4])


class TestEnumeration:
    def test_symmetric_2x2(self, sym2):
        pts = enumerate_stationary_points(sym2)
        got = {p.support: p.n for p in pts}
        assert set(got) == {(), (0,), (1,), (0, 1)}
        np.testing.assert_allclose(got[(0,)], [0.5, 0], atol=1e-12)
        np.testing.assert_allclose(got[(1,)], [0, 0.5], atol=1e-12)
        np.testing.assert_allclose(got[(0, 1)], [1 / 3, 1 / 3], atol=1e-12)
        assert [p.support for p in pts if p.is_ess] == [(0, 1)]

    def test_boundary_case(self, boundary2):
        pts = enumerate_stationary_points(boundary2)
        got = {p.support: p.n for p in pts}
        assert set(got) == {(), (0,), (1,)}
        np.testing.assert_allclose(got[(0,)], [1, 0], atol=1e-12)
        np.testing.assert_allclose(got[(1,)], [0, 0.5], atol=1e-12)
        ess = find_ess_by_enumeration(boundary2)
        np.testing.assert_allclose(ess.n, [1, 0], atol=1e-12)

    def test_logistic(self, logistic):
        pts = enumerate_stationary_points(logistic)
        assert [p.n.tolist() for p in pts] == [[0.0], pytest.approx([0.5])]
        assert [p.is_ess for p in pts] == [False, True]

    def test_matches_linear_solve_oracle(self, rng):
        for _ in range(20):
            lv = random_symmetrizable_lv(rng, int(rng.integers(1, 6)))
            model = embed_lotka_volterra(lv).model
            pts = {p.support: p.n for p in enumerate_stationary_points(model)}
            oracle = dict(lv_supports_oracle(lv))
            assert set(pts) == set(oracle)
            for I, n in oracle.items():
                np.testing.assert_allclose(pts[I], n, atol=1e-9)

    def test_uniqueness_and_minimality(self, rng):
        for _ in range(25):
            if rng.random() < 0.5:
                model = embed_lotka_volterra(random_symmetrizable_lv(rng, int(rng.integers(1, 7)))).model
            else:
                model = random_saturating_model(rng, int(rng.integers(1, 5)), 3)
            pts = enumerate_stationary_points(model)
            ess = [p for p in pts if p.is_ess]
            assert len(ess) == 1
            res = solve_ess(model)
            np.testing.assert_allclose(ess[0].n, res.n, atol=1e-8)
            for p in pts:
                assert res.F_value <= lyapunov_value(model, p.n) + 1e-10
            g = growth_rates(model, res.n)
            np.testing.assert_allclose(res.n * g, 0, atol=1e-9)
            assert np.all(g[res.n == 0] <= 1e-9)

    def test_too_many_subsets(self, rng):
        model = embed_lotka_volterra(random_symmetrizable_lv(rng, 5)).model
        with pytest.raises(TooManySubsets):
            enumerate_stationary_points(model, max_support_dim=4)


class TestClassify:
    def test_examples(self, sym2):
        pts = {p.support: p for p in enumerate_stationary_points(sym2)}
        st = classify_stationary_point(sym2, pts[(0,)])
        assert st.tag == "unstable" and st.invader == 1
        assert st.invasion_rate == pytest.approx(0.5)
        assert classify_stationary_point(sym2, pts[(0, 1)]).tag == "attracting_ESS"
        st = classify_stationary_point(sym2, pts[()])
        assert st.tag == "unstable" and st.invasion_rate == pytest.approx(1.0)

    def test_not_stationary(self, sym2):
        p = StationaryPoint(np.array([1.0, 1.0]), (0, 1), True, {}, False)
        with pytest.raises(NotStationary):
            classify_stationary_point(sym2, p)
