import csv
import io
import os

import numpy as np
import pytest

from efr.game import GameError, expected_utility
from efr.games import GameSpec
from efr.harness import (CSV_HEADER, ExperimentConfig, emit_outputs, rows_to_csv, run_experiment,
                         self_play_sequence, summarize, summary_table)
from efr.learner import EFRLearner

G3 = GameSpec("goofspiel", 3, "ascending", 2)


def small(**kw):
    base = dict(game=G3, variants=("cf", "tips"), rounds=6, plots=False)
    base.update(kw)
    return ExperimentConfig(**base)


def parse(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_empty_rows_header_only():
    assert rows_to_csv([]) == ",".join(CSV_HEADER) + "\n"


def test_row_cardinality():
    # 2 variants x 2 seats x T rounds, opponents restricted to one type
    rows = run_experiment(small(opponents=("cf",)))
    assert len(rows) == 2 * 2 * 6
    rows = run_experiment(small())
    assert len(rows) == 2 * 2 * 2 * 6


def test_row_order():
    rows = run_experiment(small())
    keys = [(r.variant, r.opponent, r.seat, r.round) for r in rows]
    order = {"cf": 0, "tips": 1}
    assert keys == sorted(keys, key=lambda k: (order[k[0]], order[k[1]], k[2], k[3]))


@pytest.mark.parametrize("regime", ["fixed", "simultaneous"])
def test_csv_byte_identical(regime):
    a = rows_to_csv(run_experiment(small(regime=regime)))
    b = rows_to_csv(run_experiment(small(regime=regime)))
    assert a == b


def test_workers_do_not_change_rows():
    a = rows_to_csv(run_experiment(small(regime="simultaneous")))
    b = rows_to_csv(run_experiment(small(regime="simultaneous", workers=2)))
    assert a == b


def test_csv_schema_and_timing_modes():
    rows = run_experiment(small(rounds=3))
    rec = parse(rows_to_csv(rows))
    assert tuple(rec[0]) == CSV_HEADER
    assert all(r["elapsed_ns"] == "" for r in rec)
    inline = parse(rows_to_csv(rows, timing="inline"))
    ns = [int(r["elapsed_ns"]) for r in inline if r["round"] in ("1", "2", "3")]
    assert all(x >= 0 for x in ns)


def test_cum_avg_column():
    rows = run_experiment(small())
    for v in ("cf", "tips"):
        sel = [r for r in rows if r.variant == v and r.opponent == "cf" and r.seat == 1]
        pay = np.array([r.payoff for r in sel])
        assert np.allclose([r.cum_avg_payoff for r in sel], np.cumsum(pay) / np.arange(1, 7))


def test_first_round_is_uniform_value():
    rows = run_experiment(small())
    assert all(r.payoff == pytest.approx(0.5) for r in rows if r.round == 1)


def test_seat_sum_simultaneous():
    # (v, o, seat 0) and (o, v, seat 1) are the same game seen from both sides
    rows = run_experiment(small(regime="simultaneous"))
    pay = {(r.variant, r.opponent, r.seat, r.round): r.payoff for r in rows}
    for (v, o, s, t), p in pay.items():
        if s == 0:
            assert p + pay[(o, v, 1, t)] == pytest.approx(1.0, abs=1e-12)


def test_seat_sum_kuhn_zero():
    rows = run_experiment(small(game=GameSpec("kuhn"), regime="simultaneous"))
    pay = {(r.variant, r.opponent, r.seat, r.round): r.payoff for r in rows}
    for (v, o, s, t), p in pay.items():
        if s == 0:
            assert p + pay[(o, v, 1, t)] == pytest.approx(0.0, abs=1e-12)


def test_fixed_regime_recomputed(goof3):
    # replay one pairing by hand: a learner against the frozen self-play
    # sequence of the opponent type, payoffs by direct expected utility
    T = 8
    rows = run_experiment(small(rounds=T, variants=("bhv",), opponents=("csps",), seats=(1,)))
    frozen = self_play_sequence(G3, "csps", T)
    me = EFRLearner(goof3, 1, "bhv")
    lo, hi = goof3.player_slot_range[1]
    want = []
    for t in range(T):
        flat = frozen[t].copy()
        flat[lo:hi] = me.probs
        want.append(expected_utility(goof3, flat)[1])
        me.observe(flat)
    assert [r.payoff for r in rows] == pytest.approx(want, abs=1e-12)


def test_summary_matches_hand_aggregation(tmp_path):
    cfg = small(out=str(tmp_path))
    rows = run_experiment(cfg)
    paths = emit_outputs(rows, cfg)
    with open(paths["results"]) as f:
        rec = list(csv.DictReader(f))
    acc = {}
    for r in rec:
        acc.setdefault(r["variant"], []).append(float(r["payoff"]))
    hand = {v: sum(p) / len(p) for v, p in acc.items()}
    with open(paths["summary"]) as f:
        written = {r["variant"]: float(r["mean_payoff"]) for r in csv.DictReader(f)}
    assert written == pytest.approx(hand, abs=1e-15)
    assert summarize(rows) == pytest.approx(hand, abs=1e-15)
    # the per-opponent table averages back to the same numbers with equal cell sizes
    tab = summary_table(rows)
    for v in hand:
        assert np.mean([m for (vv, _), m in tab.items() if vv == v]) == pytest.approx(hand[v])


def test_emit_files(tmp_path):
    cfg = small(out=str(tmp_path / "o"), plots=True, rounds=3)
    paths = emit_outputs(run_experiment(cfg), cfg)
    assert set(paths) == {"results", "summary", "timings", "curve_rounds", "curve_runtime"}
    assert all(os.path.getsize(p) > 0 for p in paths.values())


def test_three_player_seats():
    g = GameSpec("goofspiel", 3, "ascending", 3)
    rows = run_experiment(ExperimentConfig(g, variants=("cf",), rounds=2, plots=False))
    assert sorted({r.seat for r in rows}) == [0, 1, 2]
    assert all(r.payoff == pytest.approx(1 / 3) for r in rows if r.round == 1)


@pytest.mark.parametrize("kw", [dict(rounds=0), dict(regime="async"), dict(timing="wall"),
                                dict(variants=("cf", "nope")), dict(rm="rm_fancy")])
def test_config_errors(kw):
    with pytest.raises((GameError, ValueError)):
        small(**kw)
