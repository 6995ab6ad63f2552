import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from efr.game import CHANCE, GameError, StrategyProfile, expected_utility
from efr.games import GameSpec, build_game
from efr.games.goofspiel import normalize_order, round_winner, win_shares
from efr.games.leduc import MBB_PER_CHIP
from efr.games.sheriff import sheriff_payoff


def goof_points(g, z, n, order):
    labels = g.history_labels(z)
    if order == "random":
        pts = [int(x[5:]) for x in labels if x.startswith("point")]
        bids = [int(x[3:]) for x in labels if x.startswith("bid")]
    else:
        pts = list(range(1, n + 1)) if order == "ascending" else list(range(n, 0, -1))
        bids = [int(x[3:]) for x in labels]
    return pts, bids


@pytest.mark.parametrize("n,order,players", [(3, "ascending", 2), (3, "descending", 2),
                                             (3, "random", 2), (3, "ascending", 3), (4, "ascending", 2)])
def test_goofspiel_terminals_and_payoffs(n, order, players):
    g = build_game(GameSpec("goofspiel", n, order, players))
    chance_orders = 1 if order != "random" else int(np.prod(range(1, n + 1)))
    assert len(g.terminals) == oracles.goofspiel_terminal_count(n, players) * chance_orders
    assert g.perfect_recall
    for z in g.terminals[:: max(1, len(g.terminals) // 50)]:
        pts, bids = goof_points(g, int(z), n, order)
        rows = [bids[r * players:(r + 1) * players] for r in range(n)]
        assert np.allclose(g.utilities[z], oracles.goofspiel_outcome(rows, pts))


def test_goofspiel_benchmark_sizes():
    g = build_game(GameSpec("goofspiel", 5, "ascending", 2))
    assert len(g.terminals) == 14400
    assert [g.max_depth(p) for p in (0, 1)] == [4, 4]
    assert len(g.player_infosets[0]) == len(g.player_infosets[1]) == 4974


def test_goofspiel_constant_sum(goof3):
    assert np.allclose(goof3.utilities[goof3.terminals].sum(axis=1), 1.0)


def test_goofspiel_uniform_symmetric(goof3):
    u = expected_utility(goof3, StrategyProfile.uniform(goof3))
    assert u == pytest.approx([0.5, 0.5])


def test_goofspiel_hides_opponent_bids(goof3):
    # player 1 cannot see player 0's first bid: one set covers all of them
    first = [h for h in goof3.children(0)]
    sets = {int(goof3.infoset[h]) for h in first}
    assert len(sets) == 1


@pytest.mark.parametrize("bids,winner", [((3, 1), 0), ((1, 3), 1), ((2, 2), -1),
                                         ((1, 3, 3), -1), ((1, 2, 3), 2)])
def test_round_winner(bids, winner):
    assert round_winner(bids) == winner


@given(st.lists(st.integers(0, 15), min_size=2, max_size=3))
def test_win_shares_sum_to_one(points):
    s = win_shares(points)
    assert sum(s) == pytest.approx(1.0)
    assert all(x == 0 or points[i] == max(points) for i, x in enumerate(s))


@pytest.mark.parametrize("alias,name", [("asc", "ascending"), ("desc", "descending"),
                                        ("rand", "random"), ("random", "random")])
def test_order_aliases(alias, name):
    assert normalize_order(alias) == name


@pytest.mark.parametrize("kw", [dict(ranks=1), dict(players=4), dict(order="sideways")])
def test_goofspiel_spec_errors(kw):
    with pytest.raises(GameError):
        GameSpec("goofspiel", **kw)


def test_benchmark_configuration_flag():
    assert GameSpec("goofspiel", 5, "asc", 2).benchmark_configuration
    assert GameSpec("goofspiel", 4, "random", 2).benchmark_configuration
    assert not GameSpec("goofspiel", 3, "asc", 2).benchmark_configuration
    assert GameSpec("sheriff").benchmark_configuration


# Sheriff rules as stated in the game description
@pytest.mark.parametrize("items,bribe,inspect,want", [
    (3, 1, False, (2, 1)),      # not inspected: items minus bribe, sheriff gets the bribe
    (0, 2, False, (-2, 2)),
    (2, 3, True, (-4, 4)),      # illegal items found: twice the number of items
    (0, 0, True, (3, -3)),      # clean cargo: sheriff compensates three
])
def test_sheriff_payoff(items, bribe, inspect, want):
    assert sheriff_payoff(items, bribe, inspect) == want


def test_sheriff_shape():
    g = build_game(GameSpec("sheriff"))
    # items (4) then four rounds of bribe (4) x inspect (2)
    assert len(g.terminals) == 4 * 8 ** 4
    smuggler = 1 + 4 * sum(8 ** r for r in range(4))
    sheriff = 4 * sum(8 ** r for r in range(4))
    assert len(g.player_infosets[0]) == smuggler
    assert len(g.player_infosets[1]) == sheriff
    assert g.utilities[g.terminals].min() >= -6 and g.utilities[g.terminals].max() <= 6


def test_sheriff_only_last_round_binds():
    g = build_game(GameSpec("sheriff"))
    h = g.find_history(["load2", "b3", "inspect", "b0", "inspect", "b1", "inspect", "b1", "pass"])
    assert tuple(g.utilities[h]) == sheriff_payoff(2, 1, False)


def test_leduc_shape():
    g = build_game(GameSpec("leduc"))
    assert len(g.infosets) == 288
    assert g.perfect_recall
    assert g.utility_bound == 13 * MBB_PER_CHIP
    assert np.allclose(g.utilities[g.terminals].sum(axis=1), 0.0)


def test_leduc_chance_distribution():
    g = build_game(GameSpec("leduc"))
    deals = {g.edge_label(h): g.chance_prob[h] for h in g.children(0)}
    assert sum(deals.values()) == pytest.approx(1.0)
    # a pair of one rank: 1/3 for the first card, 1/5 for the second
    assert deals["KK"] == pytest.approx(1 / 15)
    assert deals["KQ"] == pytest.approx(2 / 15)


def test_leduc_fold_needs_a_bet():
    g = build_game(GameSpec("leduc"))
    for m in g.infosets:
        hist = m.key[2]
        facing = hist.split("/")[-1].endswith("r")
        assert ("f" in m.actions) == facing


def test_leduc_chip_units():
    g = build_game(GameSpec("leduc", options=(("units", "chips"),)))
    assert g.utility_bound == 13


def test_game_cache_identity():
    assert build_game(GameSpec("kuhn")) is build_game(GameSpec("kuhn"))


def test_chance_root_kuhn(kuhn):
    assert kuhn.actor[0] == CHANCE
    assert len(list(kuhn.children(0))) == 6
