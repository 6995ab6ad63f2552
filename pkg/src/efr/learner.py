"""Extensive-form regret minimization (EFR) for one player.

Every (information set, transformation, time-selection key) triple is an
*expert*.  Phase 1 of an update adds the key-weighted immediate counterfactual
regret of each transformation to its experts; phase 2 rebuilds the strategy
from the root of the player's forest downwards, because the key weights of a
set only depend on the new strategy at its predecessors.
"""
from __future__ import annotations

import numpy as np

from .deviations import DeviationTypeConfig
from .game import BehavioralStrategy, Game, counterfactual_values, edge_probabilities
from .regret_matching import check_variant, stationary_batch

EXT, INT = 0, 1


class EFRLearner:
    """EFR with a deviation type (see :data:`efr.deviations.TOKENS`) and a
    regret-matching variant."""

    def __init__(self, game: Game, player: int, devtype: str, variant: str = "rm"):
        self.game, self.player = game, player
        self.config = DeviationTypeConfig(game, player, devtype)
        self.devtype = devtype
        self.variant = check_variant(variant)
        self.lo, self.hi = game.player_slot_range[player]
        self.ids = np.asarray(game.player_infosets[player], dtype=np.int64)
        self.offset = (game.slot_offset[self.ids] - self.lo).astype(np.int64)
        self.nact = game.num_actions[self.ids].astype(np.int64)
        self._build()
        self.reset()

    # ------------------------------------------------------------- tables
    def _build(self):
        g, cfg, base = self.game, self.config, int(self.ids[0]) if len(self.ids) else 0
        self.base = base
        tf_inf, tf_kind, tf_src, tf_dst, tf_obj = [], [], [], [], []
        pair_tf, pair_key = [], []
        key_index: dict[tuple, int] = {}
        key_factors: list[tuple] = []
        for k, iid in enumerate(self.ids):
            for phi in cfg.transformations_at(int(iid)):
                keys = cfg.time_selection_keys(int(iid), phi)
                if not keys:
                    continue
                t = len(tf_obj)
                tf_obj.append(phi)
                tf_inf.append(k)
                tf_kind.append(EXT if phi.kind == "external" else INT)
                tf_src.append(phi.src)
                tf_dst.append(phi.dst)
                for key in keys:
                    f = tuple(s - self.lo for s in key.factors(g))
                    if f not in key_index:
                        key_index[f] = len(key_factors)
                        key_factors.append(f)
                    pair_tf.append(t)
                    pair_key.append(key_index[f])
        self.transformations = tf_obj
        self.tf_inf = np.array(tf_inf, dtype=np.int64)
        self.tf_kind = np.array(tf_kind, dtype=np.int64)
        self.tf_src = np.array(tf_src, dtype=np.int64)
        self.tf_dst = np.array(tf_dst, dtype=np.int64)
        self.pair_tf = np.array(pair_tf, dtype=np.int64)
        self.pair_key = np.array(pair_key, dtype=np.int64)
        self.key_factors = key_factors
        pad = self.hi - self.lo            # index of a constant 1.0 appended to the strategy
        width = max((len(f) for f in key_factors), default=0)
        F = np.full((len(key_factors), max(width, 1)), pad, dtype=np.int64)
        for i, f in enumerate(key_factors):
            F[i, :len(f)] = f
        self.F = F
        # reach factors of every information set (for the average strategy)
        depth = np.array([g.infosets[i].depth for i in self.ids], dtype=np.int64)
        self.depth = depth
        dmax = int(depth.max()) if len(depth) else 0
        R = np.full((len(self.ids), max(dmax, 1)), pad, dtype=np.int64)
        for k, iid in enumerate(self.ids):
            path = g.infoset_path(int(iid))
            R[k, :len(path)] = [int(g.slot_offset[j]) + a - self.lo for j, a in path]
        self.reach_F = R
        self.slot_inf = np.repeat(np.arange(len(self.ids)), self.nact)
        # per own-depth level: the sets, their transformations, pairs and keys
        self.levels = []
        tf_depth = depth[self.tf_inf] if len(self.tf_inf) else np.zeros(0, np.int64)
        pair_depth = tf_depth[self.pair_tf] if len(self.pair_tf) else np.zeros(0, np.int64)
        for d in range(dmax + 1):
            sets = np.flatnonzero(depth == d)
            tfs = np.flatnonzero(tf_depth == d)
            pairs = np.flatnonzero(pair_depth == d)
            keys, key_pos = np.unique(self.pair_key[pairs], return_inverse=True)
            local_tf = np.full(len(self.transformations), -1, dtype=np.int64)
            local_tf[tfs] = np.arange(len(tfs))
            groups = []
            for n in np.unique(self.nact[sets]):
                gsets = sets[self.nact[sets] == n]
                has_int = np.isin(self.tf_inf[tfs][self.tf_kind[tfs] == INT], gsets).any()
                groups.append((int(n), gsets, bool(has_int)))
            self.levels.append({
                "sets": sets, "tfs": tfs, "pairs": pairs, "keys": keys,
                "pair_keypos": key_pos.astype(np.int64), "pair_ltf": local_tf[self.pair_tf[pairs]],
                "groups": groups,
            })

    @property
    def num_experts(self) -> int:
        return len(self.pair_tf)

    def reset(self):
        self.t = 0
        self.x = np.zeros(len(self.pair_tf))
        self.m = np.zeros(len(self.pair_tf))
        self.probs = np.repeat(1.0 / np.maximum(self.nact, 1), self.nact)
        self.avg_num = np.zeros_like(self.probs)
        self.last_regrets = np.zeros(len(self.transformations))

    # ------------------------------------------------------------- accessors
    def strategy(self) -> BehavioralStrategy:
        return BehavioralStrategy(self.game, self.player, self.probs.copy(), check=False)

    def _ext(self, probs: np.ndarray) -> np.ndarray:
        return np.append(probs, 1.0)

    def key_weights(self, probs: np.ndarray | None = None, keys=None) -> np.ndarray:
        p = self._ext(self.probs if probs is None else probs)
        F = self.F if keys is None else self.F[keys]
        return np.prod(p[F], axis=1)

    def own_reach(self, probs: np.ndarray | None = None) -> np.ndarray:
        p = self._ext(self.probs if probs is None else probs)
        return np.prod(p[self.reach_F], axis=1)

    def immediate_regrets(self, values: np.ndarray, probs: np.ndarray | None = None) -> np.ndarray:
        """Immediate counterfactual regret of every transformation from the
        counterfactual action values (local slot vector)."""
        p = self.probs if probs is None else probs
        off = self.offset[self.tf_inf]
        ev = np.bincount(self.slot_inf, weights=p * values, minlength=len(self.ids))
        vd = values[off + self.tf_dst]
        src = np.where(self.tf_kind == INT, self.tf_src, 0)
        vs = values[off + src]
        ext = vd - ev[self.tf_inf]
        inn = p[off + src] * (vd - vs)
        return np.where(self.tf_kind == EXT, ext, inn)

    # ------------------------------------------------------------- update
    def observe(self, profile) -> np.ndarray:
        """One EFR update from the profile of round t (StrategyProfile or flat slot
        vector); returns the new local strategy."""
        flat = profile.flat() if hasattr(profile, "strategies") else np.asarray(profile, dtype=float)
        return self.observe_edges(edge_probabilities(self.game, flat))

    def observe_edges(self, edges: np.ndarray) -> np.ndarray:
        values = counterfactual_values(self.game, None, self.player, edges)
        return self.observe_values(values)

    def observe_values(self, values: np.ndarray) -> np.ndarray:
        """Phase 1 and 2 given this round's counterfactual action values."""
        self.t += 1
        reach = self.own_reach()
        self.avg_num += reach[self.slot_inf] * self.probs
        rho = self.immediate_regrets(values)
        self.last_regrets = rho
        w = self.key_weights()
        inc = w[self.pair_key] * rho[self.pair_tf]
        if self.variant == "rm_plus":
            self.x = np.maximum(self.x + inc, 0.0)
        elif self.variant == "rm_pp":
            self.x = self.x + np.maximum(inc, 0.0)
        else:
            self.x = self.x + inc
        if self.variant == "rm_optimistic":
            self.m = inc
        self.probs = self._next_strategy()
        return self.probs

    def _next_strategy(self) -> np.ndarray:
        new = self.probs.copy()
        xr = self.x + self.m if self.variant == "rm_optimistic" else self.x
        pos = np.maximum(xr, 0.0)
        ext = np.append(new, 1.0)
        for lev in self.levels:
            sets = lev["sets"]
            if not len(sets):
                continue
            tfs = lev["tfs"]
            if len(tfs):
                kw = np.prod(ext[self.F[lev["keys"]]], axis=1)
                pairs = lev["pairs"]
                contrib = kw[lev["pair_keypos"]] * pos[pairs]
                y = np.bincount(lev["pair_ltf"], weights=contrib, minlength=len(tfs))
            else:
                y = np.zeros(0)
            z = np.bincount(self.tf_inf[tfs] if len(tfs) else np.zeros(0, np.int64),
                            weights=y, minlength=len(self.ids))
            for n, gsets, has_int in lev["groups"]:
                sig = self._solve_group(n, gsets, tfs, y, z, has_int)
                cols = self.offset[gsets][:, None] + np.arange(n)[None, :]
                new[cols] = sig
                ext[cols] = sig
        return new

    def _solve_group(self, n, gsets, tfs, y, z, has_int):
        B = len(gsets)
        if n == 1:
            return np.ones((B, 1))
        sel = np.isin(self.tf_inf[tfs], gsets)
        ltf = np.flatnonzero(sel)
        gt = tfs[ltf]
        row = np.searchsorted(gsets, self.tf_inf[gt])
        zz = z[gsets]
        live = zz > 0
        yy = y[ltf]
        if not has_int:
            num = np.zeros((B, n))
            np.add.at(num, (row, self.tf_dst[gt]), yy)
            sig = np.full((B, n), 1.0 / n)
            sig[live] = num[live] / zz[live, None]
            return sig
        # column-stochastic operator of each live set
        S = np.zeros((B, n, n))
        kind = self.tf_kind[gt]
        e = kind == EXT
        for a in range(n):
            np.add.at(S, (row[e], self.tf_dst[gt][e], a), yy[e])
        i = ~e
        rs, src, dst, yi = row[i], self.tf_src[gt][i], self.tf_dst[gt][i], yy[i]
        tot_int = np.bincount(rs, weights=yi, minlength=B)
        S += tot_int[:, None, None] * np.eye(n)[None]
        np.add.at(S, (rs, dst, src), yi)
        np.add.at(S, (rs, src, src), -yi)
        sig = np.full((B, n), 1.0 / n)
        if live.any():
            A = S[live] / zz[live, None, None]
            sig[live] = stationary_batch(A)
        return sig

    # ------------------------------------------------------------- reporting
    def average_strategy(self) -> BehavioralStrategy:
        """Own-reach-weighted average of the strategies played so far."""
        den = np.bincount(self.slot_inf, weights=self.avg_num, minlength=len(self.ids))
        p = np.repeat(1.0 / np.maximum(self.nact, 1), self.nact)
        ok = den[self.slot_inf] > 0
        p[ok] = self.avg_num[ok] / den[self.slot_inf][ok]
        return BehavioralStrategy(self.game, self.player, p, check=False)

    def index_counts(self) -> dict:
        return {"infosets": len(self.ids), "transformations": len(self.transformations),
                "experts": self.num_experts, "keys": len(self.key_factors)}

    def __repr__(self) -> str:
        return (f"EFRLearner({self.game.name!r}, player={self.player}, type={self.devtype!r}, "
                f"variant={self.variant!r}, t={self.t})")


def efr_regret_bound(learner_or_config, T: float, constants: str = "table") -> float:
    """``2^(n_IN + 1) U |I_i| sqrt(D T)`` with the table's D and n_IN, or with
    ``constants="measured"`` D = max |W_I(phi)| * omega(Phi_I) from the actual sets."""
    cfg = learner_or_config.config if hasattr(learner_or_config, "config") else learner_or_config
    tab = cfg.table_constants()
    D = tab["D"] if constants == "table" else cfg.measured_D()
    U = cfg.game.utility_bound
    return float(2 ** (tab["n_IN"] + 1) * U * cfg.num_infosets * np.sqrt(D * T))


def self_play(game: Game, devtypes, rounds: int, variant: str = "rm", callback=None):
    """Simultaneous-update self-play; returns the learners and the list of flat
    profiles played (round 1 first)."""
    if isinstance(devtypes, str):
        devtypes = [devtypes] * game.num_players
    learners = [EFRLearner(game, p, d, variant) for p, d in enumerate(devtypes)]
    profiles = []
    for t in range(rounds):
        flat = np.concatenate([l.probs for l in learners])
        profiles.append(flat)
        edges = edge_probabilities(game, flat)
        for l in learners:
            l.observe_edges(edges)
        if callback is not None:
            callback(t, flat, learners)
    return learners, profiles
