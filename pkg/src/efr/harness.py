"""Tournament harness: fixed and simultaneous regimes, CSV and plot output.

Payoffs are exact expected utilities of each round's profile; nothing is
sampled, so a configuration always yields the same rows.  Wall-clock timings
are the one exception and go to a separate file unless asked for inline.
"""
from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .deviations import TABLE1_TOKENS, TOKENS
from .game import GameError, edge_probabilities, reach_probabilities
from .games import GameSpec, build_game
from .learner import EFRLearner
from .regret_matching import check_variant

CSV_HEADER = ("game", "regime", "variant", "opponent", "seat", "round", "payoff",
              "cum_avg_payoff", "elapsed_ns")
REGIMES = ("fixed", "simultaneous")
TIMING_MODES = ("sidecar", "inline", "off")


@dataclass(frozen=True)
class ExperimentConfig:
    game: GameSpec
    variants: tuple = TABLE1_TOKENS
    opponents: tuple | None = None     # None: same roster as variants
    rounds: int = 1000
    regime: str = "fixed"
    rm: str = "rm"
    out: str | None = None
    workers: int = 1
    seats: tuple | None = None         # None: every seat
    plots: bool = True
    timing: str = "sidecar"

    def __post_init__(self):
        if self.rounds < 1:
            raise GameError("rounds must be at least 1")
        if self.regime not in REGIMES:
            raise GameError(f"unknown regime {self.regime!r}")
        if self.timing not in TIMING_MODES:
            raise GameError(f"unknown timing mode {self.timing!r}")
        check_variant(self.rm)
        for v in tuple(self.variants) + tuple(self.opponents or ()):
            if v not in TOKENS:
                raise GameError(f"unknown deviation type {v!r}")

    @property
    def roster(self) -> tuple:
        return tuple(self.opponents) if self.opponents else tuple(self.variants)


class ResultRow(NamedTuple):
    game: str
    regime: str
    variant: str
    opponent: str
    seat: int
    round: int
    payoff: float
    cum_avg_payoff: float
    elapsed_ns: int


# ---------------------------------------------------------------- runs
def self_play_sequence(spec: GameSpec, devtype: str, rounds: int, rm: str = "rm") -> np.ndarray:
    """``(rounds, num_slots)`` flat profiles generated by self-play of one type."""
    game = build_game(spec)
    learners = [EFRLearner(game, p, devtype, rm) for p in range(game.num_players)]
    out = np.empty((rounds, game.num_slots))
    for t in range(rounds):
        flat = np.concatenate([l.probs for l in learners])
        out[t] = flat
        edges = edge_probabilities(game, flat)
        for l in learners:
            l.observe_edges(edges)
    return out


def _play(spec, regime, variant, opponent, seat, rounds, rm, frozen=None):
    """Run one (variant, opponent, seat) pairing; returns payoffs and timings."""
    game = build_game(spec)
    lo, hi = game.player_slot_range[seat]
    me = EFRLearner(game, seat, variant, rm)
    others = []
    if regime == "simultaneous":
        others = [EFRLearner(game, p, opponent, rm) for p in range(game.num_players) if p != seat]
    pay = np.empty(rounds)
    ns = np.empty(rounds, dtype=np.int64)
    start = time.perf_counter_ns()
    for t in range(rounds):
        if regime == "fixed":
            flat = frozen[t].copy()
            flat[lo:hi] = me.probs
        else:
            parts, it = [], iter(others)
            for p in range(game.num_players):
                parts.append(me.probs if p == seat else next(it).probs)
            flat = np.concatenate(parts)
        edges = edge_probabilities(game, flat)
        reach = reach_probabilities(game, edges)[game.terminals]
        pay[t] = reach @ game.utilities[game.terminals, seat]
        me.observe_edges(edges)
        for o in others:
            o.observe_edges(edges)
        ns[t] = time.perf_counter_ns() - start
    return pay, ns


def _task(args):
    return _play(*args)


def _run(config: ExperimentConfig, executor=None) -> list[ResultRow]:
    spec = config.game
    game = build_game(spec)
    seats = config.seats if config.seats is not None else tuple(range(game.num_players))
    frozen = {}
    if config.regime == "fixed":
        jobs = [(spec, o, config.rounds, config.rm) for o in config.roster]
        if executor is None:
            seqs = [self_play_sequence(*j) for j in jobs]
        else:
            seqs = list(executor.map(_seq_task, jobs))
        frozen = dict(zip(config.roster, seqs))
    tasks, keys = [], []
    for v in config.variants:
        for o in config.roster:
            for s in seats:
                keys.append((v, o, s))
                tasks.append((spec, config.regime, v, o, s, config.rounds, config.rm, frozen.get(o)))
    results = map(_task, tasks) if executor is None else executor.map(_task, tasks)
    rows = []
    label = spec.label
    for (v, o, s), (pay, ns) in zip(keys, results):
        cum = np.cumsum(pay) / np.arange(1, len(pay) + 1)
        for t in range(len(pay)):
            rows.append(ResultRow(label, config.regime, v, o, s, t + 1, float(pay[t]),
                                  float(cum[t]), int(ns[t])))
    return rows


def _seq_task(args):
    return self_play_sequence(*args)


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """Rows ordered by (variant, opponent, seat, round) whatever the parallelism."""
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            return _run(config, ex)
    return _run(config)


def run_fixed_regime(config: ExperimentConfig) -> list[ResultRow]:
    return run_experiment(replace(config, regime="fixed"))


def run_simultaneous_regime(config: ExperimentConfig) -> list[ResultRow]:
    return run_experiment(replace(config, regime="simultaneous"))


# ---------------------------------------------------------------- reporting
def _fmt(x: float) -> str:
    return repr(float(x))


def rows_to_csv(rows: Sequence[ResultRow], timing: str = "sidecar") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        ns = r.elapsed_ns if timing == "inline" else ""
        w.writerow([r.game, r.regime, r.variant, r.opponent, r.seat, r.round,
                    _fmt(r.payoff), _fmt(r.cum_avg_payoff), ns])
    return buf.getvalue()


def summarize(rows: Sequence[ResultRow]) -> dict:
    """Mean payoff per variant over rounds, opponents and seats."""
    acc: dict[str, list] = {}
    for r in rows:
        acc.setdefault(r.variant, []).append(r.payoff)
    return {v: float(np.mean(p)) for v, p in acc.items()}


def summary_table(rows: Sequence[ResultRow]) -> dict:
    """Mean payoff per (variant, opponent)."""
    acc: dict[tuple, list] = {}
    for r in rows:
        acc.setdefault((r.variant, r.opponent), []).append(r.payoff)
    return {k: float(np.mean(p)) for k, p in acc.items()}


def emit_outputs(rows: Sequence[ResultRow], config: ExperimentConfig) -> dict:
    """Write results.csv, summary.csv, timings.csv (sidecar mode) and plots."""
    out = config.out or "."
    os.makedirs(out, exist_ok=True)
    paths = {"results": os.path.join(out, "results.csv")}
    with open(paths["results"], "w", newline="") as f:
        f.write(rows_to_csv(rows, config.timing))
    paths["summary"] = os.path.join(out, "summary.csv")
    with open(paths["summary"], "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(("variant", "mean_payoff"))
        for v, m in summarize(rows).items():
            w.writerow((v, _fmt(m)))
    if config.timing == "sidecar":
        paths["timings"] = os.path.join(out, "timings.csv")
        with open(paths["timings"], "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(("variant", "opponent", "seat", "round", "elapsed_ns"))
            for r in rows:
                w.writerow((r.variant, r.opponent, r.seat, r.round, r.elapsed_ns))
    if config.plots and rows:
        paths.update(plot_curves(rows, out))
    return paths


def plot_curves(rows: Sequence[ResultRow], out: str) -> dict:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    curves: dict[str, dict] = {}
    for r in rows:
        c = curves.setdefault(r.variant, {})
        c.setdefault((r.opponent, r.seat), []).append((r.round, r.payoff, r.elapsed_ns))
    paths = {}
    for xkey, fname, xlabel in ((0, "curve_rounds.png", "round"),
                                (2, "curve_runtime.png", "elapsed seconds")):
        fig, ax = plt.subplots(figsize=(6, 4))
        for v, runs in curves.items():
            arr = np.array([np.array(p) for p in runs.values()])   # (runs, T, 3)
            pay = arr[:, :, 1].mean(axis=0)
            avg = np.cumsum(pay) / np.arange(1, len(pay) + 1)
            x = arr[:, :, xkey].mean(axis=0)
            if xkey == 2:
                x = x / 1e9
            ax.plot(x, avg, label=v)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("average expected payoff")
        ax.legend(fontsize=7)
        fig.tight_layout()
        p = os.path.join(out, fname)
        fig.savefig(p, dpi=100)
        plt.close(fig)
        paths[fname[:-4]] = p
    return paths
