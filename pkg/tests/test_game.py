import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from efr.game import (CHANCE, TERMINAL, BehavioralStrategy, GameBuilder, GameError,
                      StrategyProfile, counterfactual_value, counterfactual_value_recursive,
                      edge_probabilities, expected_utility,
                      game_from_text, history_values, immediate_cf_regret, own_reach,
                      reach_prob, reach_probabilities, validate_perfect_recall)
from efr.deviations import ActionTransformation
from efr.audit import random_profile


def matching_pennies(hidden=True):
    b = GameBuilder(2, "pennies")
    r = b.root(0, "x")
    for a, s in (("h", 1), ("t", -1)):
        c = b.child(r, a, 1, "y" if hidden else a)
        b.child(c, "h", TERMINAL, payoffs=(s, -s))
        b.child(c, "t", TERMINAL, payoffs=(-s, s))
    return b.build()


def forgetful():
    # player 0 acts twice but cannot tell its own first action apart
    b = GameBuilder(1, "forget")
    r = b.root(0, "a")
    for lab in "lr":
        c = b.child(r, lab, 0, "b")
        b.child(c, "x", TERMINAL, payoffs=(1,))
        b.child(c, "y", TERMINAL, payoffs=(0,))
    return b.build()


def test_kuhn_shape(kuhn):
    assert kuhn.num_nodes == 55
    assert len(kuhn.terminals) == 30
    assert len(kuhn.infosets) == 12
    assert [kuhn.max_depth(p) for p in (0, 1)] == [1, 0]
    assert kuhn.perfect_recall


def test_infoset_ids_contiguous_per_player(kuhn):
    for p in range(2):
        ids = kuhn.player_infosets[p]
        assert np.array_equal(ids, np.arange(ids[0], ids[0] + len(ids)))
        depths = [kuhn.infosets[i].depth for i in ids]
        assert depths == sorted(depths)


def test_matching_pennies_value():
    g = matching_pennies()
    u = expected_utility(g, StrategyProfile.uniform(g))
    assert np.allclose(u, 0.0)
    pure = StrategyProfile(g, [BehavioralStrategy.pure(g, 0, [0]), BehavioralStrategy.pure(g, 1, [0])])
    assert np.allclose(expected_utility(g, pure), [1, -1])


def test_perfect_recall_violation_reported():
    ok, diags = validate_perfect_recall(forgetful())
    assert not ok
    assert diags and "player 0" in diags[0]


def test_builder_errors():
    b = GameBuilder(2)
    r = b.root(CHANCE)
    with pytest.raises(GameError):
        b.child(r, "x", TERMINAL, payoffs=(1, -1))          # chance edge without probability
    with pytest.raises(GameError):
        b.child(r, "x", TERMINAL, prob=1.0, payoffs=(1,))   # wrong payoff arity
    with pytest.raises(GameError):
        b.root(0)
    with pytest.raises(GameError):
        GameBuilder(0)


def test_chance_probabilities_checked():
    b = GameBuilder(1)
    r = b.root(CHANCE)
    b.child(r, "a", TERMINAL, prob=0.5, payoffs=(1,))
    b.child(r, "b", TERMINAL, prob=0.4, payoffs=(0,))
    with pytest.raises(GameError):
        b.build()


def test_strategy_validation(kuhn):
    with pytest.raises(GameError):
        BehavioralStrategy(kuhn, 0, np.full(12, 0.3))
    with pytest.raises(GameError):
        BehavioralStrategy(kuhn, 0, np.full(11, 0.5))
    s = BehavioralStrategy(kuhn, 0, np.full(12, 0.5) + 1e-13)
    assert np.allclose(s[0].sum(), 1.0)


@pytest.mark.parametrize("kind", ["kuhn", "goofspiel3", "pennies"])
def test_text_roundtrip(kind, kuhn, goof3):
    g = {"kuhn": kuhn, "goofspiel3": goof3, "pennies": matching_pennies()}[kind]
    g2 = game_from_text(g.to_text())
    assert g2.num_nodes == g.num_nodes
    assert np.array_equal(g2.actor, g.actor)
    assert np.array_equal(g2.infoset, g.infoset)
    assert np.allclose(g2.utilities, g.utilities)
    assert np.allclose(g2.chance_prob, g.chance_prob)
    assert g2.to_text() == g.to_text()


@pytest.mark.parametrize("bad", ["", "efg-text 2\nplayers\t1", "efg-text 1\nh\t0\t-\t-\tz\t-\t-\t1",
                                 "efg-text 1\nplayers\t1\nh\t1\t0\tx\tz\t-\t-\t1"])
def test_text_errors(bad):
    with pytest.raises(GameError):
        game_from_text(bad)


def test_expected_utility_matches_oracle(kuhn, rng):
    for _ in range(5):
        prof = random_profile(kuhn, rng)
        table = oracles.flat_to_table(kuhn, prof.flat())
        assert expected_utility(kuhn, prof)[0] == pytest.approx(oracles.kuhn_value(table), abs=1e-12)


def test_reach_probability_factorizes(kuhn, rng):
    prof = random_profile(kuhn, rng)
    edges = edge_probabilities(kuhn, prof.flat())
    full = reach_probabilities(kuhn, edges)
    parts = [reach_probabilities(kuhn, edges, [q]) for q in (CHANCE, 0, 1)]
    assert np.allclose(full, parts[0] * parts[1] * parts[2])
    z = kuhn.terminals[7]
    assert reach_prob(kuhn, prof, int(z)) == pytest.approx(full[z])
    assert reach_prob(kuhn, prof, int(z), [0]) == pytest.approx(parts[1][z])


def test_reach_prob_from_start(kuhn):
    prof = StrategyProfile.uniform(kuhn)
    h = kuhn.find_history(["JQ", "p", "b"])
    start = kuhn.find_history(["JQ"])
    assert reach_prob(kuhn, prof, h, start=start) == pytest.approx(0.25)
    assert reach_prob(kuhn, prof, start, start=h) == 0.0
    with pytest.raises(GameError):
        reach_prob(kuhn, prof, 10**6)


@pytest.mark.parametrize("game_name", ["kuhn", "goof3"])
def test_cfv_matches_naive_walk(game_name, kuhn, goof3, rng):
    g = {"kuhn": kuhn, "goof3": goof3}[game_name]
    prof = random_profile(g, rng, sparsity=0.2)
    flat = prof.flat()
    for iid in rng.choice(len(g.infosets), size=8, replace=False):
        m = g.infosets[int(iid)]
        for a in range(m.num_actions):
            want = oracles.naive_cfv(g, flat, int(iid), a)
            assert counterfactual_value(g, prof, int(iid), a) == pytest.approx(want, abs=1e-12)


def test_cfv_bellman_recursion(kuhn, rng):
    prof = random_profile(kuhn, rng)
    for m in kuhn.infosets:
        for a in range(m.num_actions):
            assert counterfactual_value_recursive(kuhn, prof, m.id, a) == pytest.approx(
                counterfactual_value(kuhn, prof, m.id, a), abs=1e-12)


def test_root_cfv_is_expected_utility(kuhn, rng):
    # player 1's sets in Kuhn partition the second decision; player 0's roots cover the deals
    prof = random_profile(kuhn, rng)
    roots = [i for i in kuhn.player_infosets[0] if kuhn.infosets[i].depth == 0]
    total = sum(counterfactual_value(kuhn, prof, int(i), prof[0][int(i)]) for i in roots)
    assert total == pytest.approx(expected_utility(kuhn, prof)[0])


def test_cfv_rejects_bad_action(kuhn):
    prof = StrategyProfile.uniform(kuhn)
    with pytest.raises(GameError):
        counterfactual_value(kuhn, prof, 0, 5)
    with pytest.raises(GameError):
        counterfactual_value(kuhn, prof, 0, np.ones(3) / 3)


def test_immediate_regret_identity_zero(kuhn, rng):
    prof = random_profile(kuhn, rng)
    for m in kuhn.infosets:
        assert immediate_cf_regret(kuhn, prof, m.id, ActionTransformation.identity(2)) == 0.0


def test_history_values_root(kuhn, rng):
    prof = random_profile(kuhn, rng)
    vals = history_values(kuhn, edge_probabilities(kuhn, prof.flat()))
    assert np.allclose(vals[0], expected_utility(kuhn, prof))


def test_own_reach(kuhn):
    s = BehavioralStrategy.from_dict(kuhn, 0, {kuhn.infoset_by_key(0, "J:"): [0.25, 0.75]})
    assert own_reach(kuhn, s, kuhn.infoset_by_key(0, "J:pb")) == pytest.approx(0.25)
    assert own_reach(kuhn, s, kuhn.infoset_by_key(0, "J:")) == 1.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=12, max_size=12),
       st.lists(st.floats(0.01, 1.0), min_size=12, max_size=12))
def test_zero_sum_and_bounds(p0, p1):
    from efr.games import GameSpec, build_game
    g = build_game(GameSpec("kuhn"))

    def norm(x):
        x = np.asarray(x).reshape(-1, 2)
        return (x / x.sum(axis=1, keepdims=True)).ravel()

    prof = StrategyProfile(g, [BehavioralStrategy(g, 0, norm(p0)), BehavioralStrategy(g, 1, norm(p1))])
    u = expected_utility(g, prof)
    assert abs(u.sum()) < 1e-12
    assert np.all(np.abs(u) <= g.utility_bound + 1e-12)
