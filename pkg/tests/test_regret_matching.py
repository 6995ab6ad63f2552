import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from efr.deviations import ActionTransformation, external_set, internal_set, omega
from efr.regret_matching import (VARIANTS, RegretMatcher, TimeSelectionRM, fixed_point,
                                 immediate_regrets, link_outputs, regret_bound, rmpp_adversary,
                                 stationary_batch, transition_matrix, update)


def random_stochastic(rng, n, density=1.0):
    A = rng.random((n, n)) * (rng.random((n, n)) < density)
    A[rng.integers(n, size=n), np.arange(n)] += 0.1    # no empty column
    return A / A.sum(axis=0)


# ---------------------------------------------------------------- fixed points
@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_fixed_point_matches_svd_when_unique(n, seed):
    rng = np.random.default_rng(seed)
    A = random_stochastic(rng, n)                        # positive: unique fixed point
    s = stationary_batch(A)
    assert np.allclose(A @ s, s, atol=1e-10)
    assert s.min() >= 0 and s.sum() == pytest.approx(1.0)
    assert np.allclose(s, oracles.brute_stationary(A), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.floats(0.1, 0.6), st.integers(0, 2**32 - 1))
def test_fixed_point_is_cesaro_limit(n, density, seed):
    # sparse chains are often reducible: several fixed points, pick the uniform-start limit
    rng = np.random.default_rng(seed)
    A = random_stochastic(rng, n, density)
    s = stationary_batch(A)
    assert np.allclose(A @ s, s, atol=1e-10)
    assert np.allclose(s, oracles.cesaro_limit(A), atol=1e-8)


def test_batch_equals_loop(rng):
    As = np.stack([random_stochastic(rng, 4, 0.4) for _ in range(10)])
    out = stationary_batch(As)
    for A, s in zip(As, out):
        assert np.allclose(s, stationary_batch(A))


def test_near_reducible_chain():
    # states 0 and 1 leak into each other at rates 1e-31 and 4e-8; the residual
    # check of the projection fails and the class-wise solve takes over
    A = np.array([[1 - 3.8e-8, 3.7e-31, 0.5 - 1.9e-8],
                  [3.8e-8, 1 - 3.7e-31, 0.5 - 1.9e-8],
                  [0.0, 0.0, 3.8e-8]])
    s = stationary_batch(A)
    assert np.abs(A @ s - s).max() <= 1e-10
    assert s == pytest.approx([0.0, 1.0, 0.0], abs=1e-12)


def test_identity_matrix_keeps_uniform():
    assert np.allclose(stationary_batch(np.eye(3)), 1 / 3)


def test_single_action():
    assert stationary_batch(np.ones((1, 1))) == pytest.approx([1.0])


def test_fixed_point_zero_weight_is_uniform():
    phis = internal_set(3)
    assert np.allclose(fixed_point(phis, np.zeros(len(phis))), 1 / 3)


def test_external_fixed_point_is_weight_share():
    phis = external_set(3)
    s = fixed_point(phis, [1.0, 0.0, 3.0])
    assert s == pytest.approx([0.25, 0.0, 0.75])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_fixed_point_of_mixed_transformations(n, seed):
    rng = np.random.default_rng(seed)
    phis = external_set(n) + internal_set(n)
    y = rng.random(len(phis)) * (rng.random(len(phis)) < 0.5)
    assume(y.sum() > 0)
    s = fixed_point(phis, y)
    mixed = sum(yy * phi.apply_dist(s) for phi, yy in zip(phis, y)) / y.sum()
    assert np.allclose(mixed, s, atol=1e-10)


def test_transition_matrix_is_column_stochastic(rng):
    phis = internal_set(4)
    y = rng.random(len(phis))
    A = transition_matrix(phis, y, y.sum())
    assert np.allclose(A.sum(axis=0), 1.0)


# ---------------------------------------------------------------- transformations
@pytest.mark.parametrize("n,want", [(2, 1), (3, 2), (4, 3)])
def test_omega_internal(n, want):
    assert omega(internal_set(n), n) == want


@pytest.mark.parametrize("n", [2, 3, 5])
def test_omega_external(n):
    assert omega(external_set(n), n) == n - 1


def test_degenerate_transformations_are_identity():
    assert ActionTransformation.internal(3, 1, 1).is_identity
    assert ActionTransformation.external(1, 0).is_identity


def test_immediate_regrets_by_hand():
    phis = [ActionTransformation.external(3, 2), ActionTransformation.internal(3, 0, 1)]
    sigma = np.array([0.5, 0.25, 0.25])
    v = np.array([1.0, 3.0, -1.0])
    ev = 0.5 + 0.75 - 0.25
    assert immediate_regrets(phis, sigma, v) == pytest.approx([-1.0 - ev, 0.5 * (3.0 - 1.0)])


# ---------------------------------------------------------------- link and update
def test_link_outputs_relu():
    y, z = link_outputs([1.0, -2.0, 3.0], [0.5, 1.0, 1.0], pair_phi=np.array([0, 0, 1]), num_phi=2)
    assert y == pytest.approx([0.5, 3.0]) and z == pytest.approx(3.5)


@pytest.mark.parametrize("variant,want", [("rm", [-1.0, 2.0]), ("rm_plus", [0.0, 2.0]),
                                          ("rm_pp", [1.0, 2.0]), ("rm_optimistic", [-1.0, 2.0])])
def test_update_variants(variant, want):
    x = update(np.array([1.0, 1.0]), np.array([-2.0, 1.0]), 1.0, variant)
    assert x == pytest.approx(want)


def test_unknown_variant():
    with pytest.raises(ValueError):
        RegretMatcher(2, "rm_fancy")


# ---------------------------------------------------------------- guarantees
@pytest.mark.parametrize("variant", ["rm", "rm_plus"])
@pytest.mark.parametrize("family", ["external", "internal"])
def test_time_selection_regret_bound(variant, family, rng):
    n, keys, T, U = 3, 2, 400, 1.0
    phis = external_set(n) if family == "external" else internal_set(n)
    learner = TimeSelectionRM(phis, keys, variant)
    regret = np.zeros((len(phis), keys))
    for t in range(T):
        w = rng.random(keys)
        sigma, _, _ = learner.policy(w)
        v = rng.uniform(-U, U, size=n)
        # an adaptive adversary: punish the most likely action
        v[np.argmax(sigma)] = -U
        rho = learner.observe(sigma, v, w)
        regret += w * rho[:, None]
        assert sigma.min() >= -1e-12 and sigma.sum() == pytest.approx(1.0)
    # |rho| <= 2U, M = number of keys
    bound = regret_bound(U, keys, omega(phis, n), T)
    assert regret.max() <= bound


@pytest.mark.parametrize("variant", VARIANTS)
def test_regret_matcher_no_regret_on_fixed_rewards(variant):
    rm = RegretMatcher(3, variant)
    for _ in range(200):
        rm.observe([0.0, 1.0, 0.5])
    assert rm.policy()[1] == pytest.approx(1.0)


def test_rmpp_adversary_matches_oracle():
    T = 10_000
    q, reg = oracles.rmpp_adversary_oracle(T)
    out = rmpp_adversary(T)
    assert out["Q_T"] == pytest.approx(q, rel=1e-12)
    assert out["regret"][-1] == pytest.approx(reg, rel=1e-9)


def test_rmpp_accumulates_linearly():
    out = rmpp_adversary(10_000)
    t = np.arange(1, 10_001)
    assert np.all(out["Q"][99:] >= t[99:] / 4)          # positive-part sum grows like T / 4
    assert np.all(out["regret"] <= 2 * np.sqrt(2 * t))  # while true regret stays sublinear
    assert out["Q_T"] == pytest.approx(2501.436, abs=1e-3)
