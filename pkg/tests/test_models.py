import numpy as np
import pytest

from lvess import (DiscreteMeasure, GeneralizedModel, InvariantError, LotkaVolterraModel,
                   ResourceModel, Saturating, check_assumptions, embed_lotka_volterra,
                   growth_rates, lv_growth_rates, resource_growth_rates, resource_to_generalized)
from lvess.corpus import random_resource_model, random_symmetrizable_lv


def test_growth_rates_examples(sym2):
    np.testing.assert_allclose(growth_rates(sym2, [1 / 3, 1 / 3]), [0, 0], atol=1e-15)
    np.testing.assert_allclose(growth_rates(sym2, [0, 0]), [1, 1], atol=1e-15)
    np.testing.assert_allclose(growth_rates(sym2, [1, 1]), [-2, -2], atol=1e-14)


def test_growth_rates_errors(sym2):
    with pytest.raises(ValueError):
        growth_rates(sym2, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        growth_rates(sym2, [np.nan, 1.0])
    with pytest.raises(ValueError):
        growth_rates(sym2, [-1.0, 1.0])


def test_lv_growth_rates_examples():
    lv = LotkaVolterraModel([1, 1], [[2, 1], [1, 2]])
    np.testing.assert_allclose(lv_growth_rates(lv, [1 / 3, 1 / 3]), [0, 0], atol=1e-15)
    np.testing.assert_array_equal(lv_growth_rates(lv, [0, 0]), lv.r)
    lv = LotkaVolterraModel([1, 0.5], [[1, 0.9], [0.9, 1]])
    np.testing.assert_allclose(lv_growth_rates(lv, [1, 0]), [0, -0.4], atol=1e-15)


def test_resource_growth_rates_examples():
    rm = ResourceModel([0.2], [[1.0]], [1.0])
    assert resource_growth_rates(rm, [1.0])[0] == pytest.approx(0.3, abs=1e-15)
    assert resource_growth_rates(rm, [0.0])[0] == pytest.approx(0.8, abs=1e-15)
    assert resource_growth_rates(rm, [4.0])[0] == pytest.approx(0.0, abs=1e-15)


def test_resource_to_generalized_example():
    gm = resource_to_generalized(ResourceModel([0.2], [[1.0]], [1.0]))
    np.testing.assert_allclose(gm.r, [0.8])
    np.testing.assert_array_equal(gm.K, [[1.0]])
    np.testing.assert_array_equal(gm.B, [[1.0]])
    np.testing.assert_array_equal(gm.weights, [1.0])
    assert gm.response == Saturating(1.0)
    assert growth_rates(gm, [1.0])[0] == pytest.approx(0.3, abs=1e-15)
    assert growth_rates(gm, [0.0])[0] == pytest.approx(0.8, abs=1e-15)


def _rel(a, b, scale):
    return np.max(np.abs(a - b)) / scale


def test_embedding_matches_lv_on_random_states(rng):
    for _ in range(10):
        lv = random_symmetrizable_lv(rng, int(rng.integers(1, 7)))
        gm = embed_lotka_volterra(lv).model
        for n in rng.uniform(0, 3, (100, lv.N)):
            direct = lv_growth_rates(lv, n)
            scale = np.max(np.abs(lv.r)) + np.max(lv.b @ n)
            assert _rel(growth_rates(gm, n), direct, scale) <= 1e-12


def test_resource_mapping_matches_on_random_states(rng):
    rm = random_resource_model(rng, 4, 3)
    gm = resource_to_generalized(rm)
    for n in rng.uniform(0, 5, (100, 4)):
        direct = resource_growth_rates(rm, n)
        scale = np.max(np.abs(rm.d)) + np.max(rm.eta.T @ rm.I0)
        assert _rel(growth_rates(gm, n), direct, scale) <= 1e-12


def test_identity_growth_is_affine(rng):
    lv = random_symmetrizable_lv(rng, 4)
    gm = embed_lotka_volterra(lv).model
    g0 = growth_rates(gm, np.zeros(4))
    for _ in range(20):
        x, y = rng.uniform(0, 2, (2, 4))
        a, b = rng.uniform(0, 2, 2)
        lhs = growth_rates(gm, a * x + b * y) - g0
        rhs = a * (growth_rates(gm, x) - g0) + b * (growth_rates(gm, y) - g0)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_construction_rejects_asymmetric_kernels():
    K = np.array([[1.0, 0.5], [0.2, 1.0]])
    with pytest.raises(InvariantError, match="B = diag"):
        GeneralizedModel([1, 1], K, K * 1.001, DiscreteMeasure([1, 1]), [1, 1], Saturating(1.0))
    # exact match passes
    GeneralizedModel([1, 1], K, 2 * K, DiscreteMeasure([1, 1]), [2, 2], Saturating(1.0))


def test_construction_invariants():
    K = np.ones((2, 2))
    with pytest.raises(InvariantError):
        GeneralizedModel.from_kernel([1, 1], -K, [1, 1], response=Saturating(1.0))
    with pytest.raises(InvariantError):
        GeneralizedModel.from_kernel([1, 1], K, [0, 0])
    with pytest.raises(InvariantError):
        GeneralizedModel.from_kernel([1, 1], K, [-1, 1])
    with pytest.raises(InvariantError):
        GeneralizedModel.from_kernel([1, 1], K, [1, 1], C=[1, 0])
    with pytest.raises(InvariantError):
        GeneralizedModel.from_kernel([1, 1, 1], K, [1, 1])
    with pytest.raises(InvariantError):
        LotkaVolterraModel([1, 1], [[1, -0.1], [0, 1]])
    with pytest.raises(InvariantError):
        ResourceModel([0.1], [[1.0]], [0.0])
    # zero weights are inert but allowed
    gm = GeneralizedModel.from_kernel([1, 1], K, [1, 0])
    np.testing.assert_allclose(growth_rates(gm, [1, 1]), [1 - 2, 1 - 2])


def test_models_are_immutable(sym2):
    with pytest.raises(ValueError):
        sym2.r[0] = 5.0
    with pytest.raises(AttributeError):
        sym2.r = np.zeros(2)


class TestAssumptions:
    def test_symmetric_embedding_passes(self, sym2):
        rep = check_assumptions(sym2)
        assert rep.strict_competition.passed
        assert rep.symmetry.passed
        assert rep.non_extinction.passed
        assert rep.non_degeneracy.verdict == "verified-heuristically"
        assert rep.ok

    def test_saturating_strict_competition_fails(self):
        gm = GeneralizedModel.from_kernel([1.2, 0.5], [[1.0], [1.0]], [1.0], response=Saturating(1.0))
        rep = check_assumptions(gm)
        assert not rep.strict_competition.passed
        assert rep.strict_competition.violating == (0,)
        assert rep.strict_competition.margins[0] == pytest.approx(-0.2)
        assert not rep.ok

    def test_negative_rate_fails_non_extinction(self):
        gm = GeneralizedModel.from_kernel([-0.1, 0.5], np.eye(2), [1.0, 1.0])
        rep = check_assumptions(gm)
        assert not rep.non_extinction.passed
        assert rep.non_extinction.violating == (0,)
        assert rep.non_extinction.margins[0] == pytest.approx(-0.1)

    def test_equality_margin_is_a_failure(self):
        gm = GeneralizedModel.from_kernel([0.0, 0.5], np.eye(2), [1.0, 1.0])
        assert not check_assumptions(gm).non_extinction.passed

    def test_degeneracy_unverified_for_large_models(self, rng):
        gm = embed_lotka_volterra(random_symmetrizable_lv(rng, 5)).model
        rep = check_assumptions(gm, max_support_dim=4)
        assert rep.non_degeneracy.verdict == "unverified"
        assert rep.ok

    def test_report_serializes(self, sym2):
        import json
        json.dumps(check_assumptions(sym2).to_dict())
