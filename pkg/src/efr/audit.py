"""Brute-force checks on small games: full regret, OSR gap, decompositions,
empirical distributions of play and best responses."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .deviations import (AUDIT_FAMILIES, DEFAULT_BUDGET, STAR, ActionTransformation,
                         BehavioralDeviation, BudgetExceeded, PureStrategySpace, deviation_maps,
                         enumerate_family)
from .regret_matching import stationary_batch
from .game import (CHANCE, BehavioralStrategy, Game, GameError, StrategyProfile,
                   counterfactual_values, edge_probabilities, expected_utility,
                   reach_probabilities)

ORACLE_GAMES = ("kuhn", "goofspiel(3,ascending,2)")


def check_oracle_game(game: Game):
    if game.name not in ORACLE_GAMES:
        raise BudgetExceeded(f"enumeration checks are limited to {ORACLE_GAMES}, not {game.name}")


def _flat(game, profile):
    return profile.flat() if isinstance(profile, StrategyProfile) else np.asarray(profile, float)


def _local(game, player, flat):
    lo, hi = game.player_slot_range[player]
    return flat[lo:hi]


# ---------------------------------------------------------------- behavioral deviations
class DeviationValues:
    """Recursive deviation values of one behavioral deviation under one profile."""

    def __init__(self, game: Game, deviation: BehavioralDeviation, profile):
        self.game, self.dev = game, deviation
        self.player = deviation.player
        self.flat = _flat(game, profile)
        self.strategy = BehavioralStrategy(game, self.player, _local(game, self.player, self.flat),
                                           check=False)
        edges = edge_probabilities(game, self.flat)
        self.edges = edges
        others = [CHANCE] + [q for q in range(game.num_players) if q != self.player]
        self.reach_o = reach_probabilities(game, edges, others)
        lo = game.player_slot_range[self.player][0]
        self.cfv = counterfactual_values(game, None, self.player, edges)
        self._lo = lo
        self._cache: dict = {}

    def action_values(self, iid: int) -> np.ndarray:
        off = int(self.game.slot_offset[iid]) - self._lo
        return self.cfv[off:off + self.game.infosets[iid].num_actions]

    def value(self, iid: int) -> float:
        """``v_I(pi)``."""
        return float(self.strategy[iid] @ self.action_values(iid))

    def immediate(self, iid: int, a: int) -> float:
        """``r(I, a)``: value of terminals reached right after ``a``."""
        zs = list(self.game.infosets[iid].terminal_successors[a])
        return float(self.reach_o[zs] @ self.game.utilities[zs, self.player]) if zs else 0.0

    def deviation_value(self, iid: int, g) -> float:
        """``v-hat_{I,g}``: value from I and memory g when the deviation is followed."""
        key = (iid, tuple(g))
        if key in self._cache:
            return self._cache[key]
        meta = self.game.infosets[iid]
        phi = self.dev[iid, g]
        sigma = self.strategy[iid]
        v = 0.0
        for a in range(meta.num_actions):
            if sigma[a] == 0:
                continue
            b = phi.apply(a)
            inner = self.immediate(iid, b)
            for c in meta.children_by_action[b]:
                inner += self.deviation_value(c, tuple(g) + (phi.observe(a),))
            v += sigma[a] * inner
        self._cache[key] = v
        return v

    def memory_probability(self, iid: int, g) -> float:
        return self.dev.memory_probability(iid, g, self.strategy)

    def full_regret(self, iid: int, g) -> float:
        return self.memory_probability(iid, g) * (self.deviation_value(iid, g) - self.value(iid))

    def immediate_regret(self, iid: int, g) -> float:
        """``w(I, g) * rho^CF_I(phi_{I,g})``."""
        phi = self.dev[iid, g]
        sigma = self.strategy[iid]
        v = self.action_values(iid)
        return self.memory_probability(iid, g) * float(phi.apply_dist(sigma) @ v - sigma @ v)

    def successor_terms(self, iid: int, g) -> list[tuple[int, tuple]]:
        """Every (I', g b) pair that follows (I, g): I' in I_i(I, a') for an action
        a' the deviation can produce and b a symbol it observes on the way."""
        meta = self.game.infosets[iid]
        phi = self.dev[iid, g]
        out = []
        for a in range(meta.num_actions):
            b = phi.apply(a)
            for c in meta.children_by_action[b]:
                item = (c, tuple(g) + (phi.observe(a),))
                if item not in out:
                    out.append(item)
        return out

    def decomposition(self, iid: int, g) -> tuple[float, float]:
        """(full regret, immediate regret + sum of successor full regrets)."""
        lhs = self.full_regret(iid, g)
        rhs = self.immediate_regret(iid, g) + sum(self.full_regret(c, h)
                                                  for c, h in self.successor_terms(iid, g))
        return lhs, rhs

    def recorrelation_cases(self, iid: int, g) -> tuple[float, float]:
        """The re-correlation term two ways: the generic successor sum and the
        three-case split by transformation kind."""
        meta = self.game.infosets[iid]
        phi = self.dev[iid, g]
        g = tuple(g)
        generic = sum(self.full_regret(c, h) for c, h in self.successor_terms(iid, g))
        if phi.kind == "identity":
            cases = sum(self.full_regret(c, g + (a,))
                        for a in range(meta.num_actions) for c in meta.children_by_action[a])
        elif phi.kind == "external":
            cases = sum(self.full_regret(c, g + (STAR,)) for c in meta.children_by_action[phi.dst])
        else:
            cases = sum(self.full_regret(c, g + (phi.src,))
                        for c in meta.children_by_action[phi.dst])
            cases += sum(self.full_regret(c, g + (a,))
                         for a in range(meta.num_actions) if a != phi.src
                         for c in meta.children_by_action[a])
        return generic, cases


def full_regret(deviation: BehavioralDeviation, iid: int, g, profile) -> float:
    return DeviationValues(deviation.game, deviation, profile).full_regret(iid, g)


def random_behavioral_deviation(game: Game, player: int, rng: np.random.Generator,
                                p_change: float = 0.6) -> BehavioralDeviation:
    """Random transformations (identity, external or internal) at realizable memories."""
    dev = BehavioralDeviation(game, player)
    for iid in game.player_infosets[player]:
        iid = int(iid)
        n = game.infosets[iid].num_actions
        for mem in sorted(dev.realizable_memories(iid), key=repr):
            if n < 2 or rng.random() > p_change:
                continue
            if rng.random() < 0.5:
                dev[iid, mem] = ActionTransformation.external(n, int(rng.integers(n)))
            else:
                a, b = rng.choice(n, size=2, replace=False)
                dev[iid, mem] = ActionTransformation.internal(n, int(a), int(b))
    return dev


def random_profile(game: Game, rng: np.random.Generator, sparsity: float = 0.0) -> StrategyProfile:
    strategies = []
    for p in range(game.num_players):
        ids = game.player_infosets[p]
        probs = rng.random(int(game.num_actions[ids].sum())) + 1e-3
        if sparsity:
            probs[rng.random(len(probs)) < sparsity] = 0.0
        lo = game.player_slot_range[p][0]
        starts = game.slot_offset[ids] - lo
        sums = np.add.reduceat(probs, starts)
        for k, iid in enumerate(ids):
            if sums[k] == 0:
                probs[starts[k]] = 1.0
        sums = np.add.reduceat(probs, starts)
        probs /= np.repeat(sums, game.num_actions[ids])
        strategies.append(BehavioralStrategy(game, p, probs))
    return StrategyProfile(game, strategies)


# ---------------------------------------------------------------- empirical play
class EmpiricalPlay:
    """Sequence of flat profiles ``pi^1 .. pi^T``."""

    def __init__(self, game: Game, profiles=()):
        self.game = game
        self.profiles = [np.asarray(_flat(game, p), dtype=float) for p in profiles]

    def append(self, profile):
        self.profiles.append(np.asarray(_flat(self.game, profile), dtype=float))

    def __len__(self):
        return len(self.profiles)

    def spaces(self, budget=DEFAULT_BUDGET):
        return [PureStrategySpace(self.game, p, budget) for p in range(self.game.num_players)]

    def distribution(self, budget=DEFAULT_BUDGET) -> np.ndarray:
        """``mu^T`` over pure profiles, as an array with one axis per player."""
        g = self.game
        spaces = self.spaces(budget)
        if np.prod([s.size for s in spaces], dtype=float) > budget:
            raise BudgetExceeded("too many pure profiles")
        mu = np.zeros([s.size for s in spaces])
        for flat in self.profiles:
            parts = []
            for p, sp in enumerate(spaces):
                st = BehavioralStrategy(g, p, _local(g, p, flat), check=False)
                parts.append(sp.strategy_probs(st))
            mu += _outer(parts)
        return mu / max(len(self.profiles), 1)

    def average_strategies(self) -> StrategyProfile:
        """Realization-equivalent average (own-reach weighted) of every player."""
        g = self.game
        out = []
        for p in range(g.num_players):
            lo, hi = g.player_slot_range[p]
            num = np.zeros(hi - lo)
            for flat in self.profiles:
                st = BehavioralStrategy(g, p, flat[lo:hi], check=False)
                num += _own_reach_slots(g, p, st) * st.probs
            ids = g.player_infosets[p]
            starts = g.slot_offset[ids] - lo
            den = np.repeat(np.add.reduceat(num, starts), g.num_actions[ids]) if len(ids) else num
            probs = np.where(den > 0, num / np.where(den > 0, den, 1), 0.0)
            uni = np.repeat(1.0 / g.num_actions[ids], g.num_actions[ids])
            probs = np.where(den > 0, probs, uni)
            out.append(BehavioralStrategy(g, p, probs, check=False))
        return StrategyProfile(g, out)


def _outer(parts):
    mu = parts[0]
    for q in parts[1:]:
        mu = np.multiply.outer(mu, q)
    return mu


def _own_reach_slots(game, player, strategy):
    ids = game.player_infosets[player]
    reach = np.ones(len(ids))
    for k, iid in enumerate(ids):
        for j, a in game.infoset_path(int(iid)):
            reach[k] *= strategy[j][a]
    return np.repeat(reach, game.num_actions[ids])


def _terminal_weights(game, player, flat):
    """``c(z) = P(z; pi_-i) u_i(z)`` (chance included)."""
    edges = edge_probabilities(game, flat)
    others = [CHANCE] + [q for q in range(game.num_players) if q != player]
    reach = reach_probabilities(game, edges, others)
    z = game.terminals
    return reach[z] * game.utilities[z, player]


# ---------------------------------------------------------------- full regret audit
class FullRegretAudit:
    """Cumulative full regret of pure-strategy deviation maps
    from every information set of one player.

    ``maps`` is a ``(K, N)`` array of canonical image indices over the player's
    pure strategies.  Values are linear in the learner's mixed strategy, so the
    round-by-round data reduce to ``K[s, z] = sum_t pi^t(s) c^t(z)``.
    """

    def __init__(self, game: Game, player: int, maps: np.ndarray, budget=DEFAULT_BUDGET):
        self.game, self.player = game, player
        self.space = sp = PureStrategySpace(game, player, budget)
        self.maps = np.asarray(maps, dtype=np.int64)
        self.R, zs = sp.terminal_reach()
        # terminals below each information set
        m = len(sp.ids)
        self.ZI = np.zeros((m, len(zs)), dtype=bool)
        for col, z in enumerate(zs):
            h = int(z)
            while h != 0:
                par = int(game.parent[h])
                if game.actor[par] == player:
                    self.ZI[int(game.infoset[par]) - sp.base, col] = True
                h = par
        self.K = np.zeros((sp.size, len(zs)))
        self.T = 0
        # phi_{<I}: image digits at strict predecessors of I, original digits elsewhere
        S = sp.S
        img = S[self.maps] if len(self.maps) else np.zeros((0, sp.size, m), dtype=np.int64)
        self._img_idx = self.maps
        self._prev_idx = np.empty((m,) + self.maps.shape, dtype=np.int64)
        for k in range(m):
            mix = np.where(sp.pred[k][None, None, :], img, S[None, :, :])
            self._prev_idx[k] = mix @ sp.place

    def observe(self, profile):
        flat = _flat(self.game, profile)
        st = BehavioralStrategy(self.game, self.player, _local(self.game, self.player, flat),
                                check=False)
        w = self.space.strategy_probs(st)
        c = _terminal_weights(self.game, self.player, flat)
        self.K += np.outer(w, c)
        self.T += 1

    def cumulative(self) -> np.ndarray:
        """``(m, K)`` cumulative full regret per information set and map."""
        m = len(self.space.ids)
        out = np.zeros((m, len(self.maps)))
        if not len(self.maps):
            return out
        rows = np.arange(self.space.size)[None, :]
        for k in range(m):
            G = (self.K * self.ZI[k][None, :]) @ self.R.T          # G[s, s'] for set k
            dev = G[rows, self._img_idx].sum(axis=1)
            base = G[rows, self._prev_idx[k]].sum(axis=1)
            out[k] = dev - base
        return out

    def max_cumulative(self) -> float:
        c = self.cumulative()
        return float(c.max()) if c.size else 0.0

    def gap(self) -> float:
        """OSR gap: positive part of the largest average full regret."""
        return max(self.max_cumulative() / max(self.T, 1), 0.0)


def audit_maps(game: Game, player: int, token: str, budget=DEFAULT_BUDGET) -> np.ndarray:
    """Canonical maps of the deviation set a type is measured against; any
    game whose enumeration fits in ``budget``."""
    space = PureStrategySpace(game, player, budget)
    return deviation_maps(space, AUDIT_FAMILIES[token], budget)


def osr_gap(play: EmpiricalPlay, player: int, maps: np.ndarray) -> float:
    audit = FullRegretAudit(play.game, player, maps)
    for p in play.profiles:
        audit.observe(p)
    return audit.gap()


def single_target_maps(space: PureStrategySpace, family: str, budget=DEFAULT_BUDGET) -> np.ndarray:
    """Maps of the single-target deviations generated from a family: apply the
    deviation up to and at one target set, keep the strategy everywhere else."""
    seen = {}
    ident = space.index(space.canonical(space.S))
    m = len(space.ids)
    for dev in enumerate_family(space, family):
        img = dev.apply(space)
        for k in range(m):
            keep = space.pred[k].copy()
            keep[k] = True
            out = np.where(keep[None, :], img, space.S)
            idx = space.index(space.canonical(out))
            if not np.array_equal(idx, ident):
                seen.setdefault(idx.tobytes(), idx)
    if not seen:
        return np.zeros((0, space.size), dtype=np.int64)
    arr = np.array(list(seen.values()))
    return arr[np.lexsort(arr.T[::-1])]


def deviation_incentive(play: EmpiricalPlay, player: int, image: np.ndarray,
                        tol: float = 1e-10) -> float:
    """Average one-shot regret of a pure-strategy map, computed from mu^T and
    from the per-round profiles; raises if the two disagree."""
    g = play.game
    spaces = play.spaces()
    sp = spaces[player]
    R, zs = sp.terminal_reach()
    # path 1: per round, pushforward of pi^t_i against pi^t_-i
    total = 0.0
    for flat in play.profiles:
        st = BehavioralStrategy(g, player, _local(g, player, flat), check=False)
        w = sp.strategy_probs(st)
        c = _terminal_weights(g, player, flat)
        pushed = np.zeros(sp.size)
        np.add.at(pushed, image, w)
        total += (pushed - w) @ R @ c
    per_round = total / max(len(play), 1)
    # path 2: expectation over the empirical distribution of pure profiles
    mu = play.distribution()
    util = _pure_utilities(g, spaces, player)
    moved = np.take(util, image, axis=player)
    via_mu = float(np.sum(mu * (moved - util)))
    if abs(via_mu - per_round) > tol * max(1.0, g.utility_bound):
        raise ArithmeticError(f"average-regret identity violated: {via_mu} vs {per_round}")
    return via_mu


def _pure_utilities(game, spaces, player) -> np.ndarray:
    """u_player for every pure profile (axes: players)."""
    reach = [sp.terminal_reach()[0] for sp in spaces]      # (N_p, Z)
    zs = game.terminals
    chance = np.ones(len(zs))
    for col, z in enumerate(zs):
        h = int(z)
        while h != 0:
            par = int(game.parent[h])
            if game.actor[par] == CHANCE:
                chance[col] *= game.chance_prob[h]
            h = par
    u = chance * game.utilities[zs, player]
    letters = "abcdefgh"[:len(spaces)]
    expr = ",".join(f"{l}z" for l in letters) + ",z->" + letters
    return np.einsum(expr, *reach, u)


# ---------------------------------------------------------------- best responses
def best_response(game: Game, profile, player: int) -> tuple[BehavioralStrategy, float]:
    """Pure best response of ``player`` against the rest of ``profile`` and its value."""
    flat = _flat(game, profile).copy()
    lo, hi = game.player_slot_range[player]
    ids = game.player_infosets[player]
    depth = np.array([game.infosets[i].depth for i in ids])
    for d in range(int(depth.max()) if len(ids) else -1, -1, -1):
        vals = counterfactual_values(game, None, player, edge_probabilities(game, flat))
        for k in np.flatnonzero(depth == d):
            iid = ids[k]
            off = int(game.slot_offset[iid]) - lo
            n = game.infosets[iid].num_actions
            a = int(np.argmax(vals[off:off + n]))
            flat[lo + off:lo + off + n] = 0.0
            flat[lo + off + a] = 1.0
    br = BehavioralStrategy(game, player, flat[lo:hi], check=False)
    return br, float(expected_utility(game, flat)[player])


def best_response_gap(play_or_profile, player: int, game: Game | None = None) -> float:
    """Best-response value against the others' average strategy minus the
    player's value under the average profile (two-player zero-sum games)."""
    if isinstance(play_or_profile, EmpiricalPlay):
        game = play_or_profile.game
        prof = play_or_profile.average_strategies()
    else:
        prof = play_or_profile
        game = game or prof.game
    if game.num_players != 2:
        raise GameError("best_response_gap needs a two-player game")
    z = game.terminals
    if np.abs(game.utilities[z].sum(axis=1)).max() > 1e-9:
        raise GameError("best_response_gap needs a zero-sum game")
    flat = _flat(game, prof)
    _, v = best_response(game, flat, player)
    return v - float(expected_utility(game, flat)[player])


def exploitability(game: Game, profile) -> float:
    """Average over players of best-response gains."""
    return sum(best_response_gap(profile, p, game) for p in range(game.num_players)) / 2.0


# ---------------------------------------------------------------- regret streams
STREAM_FAMILIES = ("external", "internal", "exin")


def _stream_phis(family, n):
    from .deviations import external_set, internal_set
    if family == "external":
        return external_set(n)
    if family == "internal":
        return internal_set(n)
    return external_set(n) + internal_set(n)


def stream_bound_audit(streams: int = 200, rounds: int = 10**4, seed: int = 0,
                       actions=(2, 5), keys=(1, 4), U: float = 1.0) -> list[dict]:
    """Time-selection regret matching on seeded random reward streams.

    Stream k draws its action count, key count and transformation family from
    ``seed + k``; rewards are uniform on [-U, U] and key weights uniform on
    [0, 1].  Streams sharing (n, family) are run as one batch.  Returns, per
    stream, the largest cumulative weighted regret over (transformation, key)
    pairs and the bound ``2 U sqrt(M omega T)``.
    """
    from .deviations import omega
    from .regret_matching import regret_bound

    plan = []
    for k in range(streams):
        r = np.random.default_rng(seed + k)
        n = int(r.integers(actions[0], actions[1] + 1))
        m = int(r.integers(keys[0], keys[1] + 1))
        fam = STREAM_FAMILIES[int(r.integers(len(STREAM_FAMILIES)))]
        plan.append((n, m, fam, r))
    out = [None] * streams
    groups: dict[tuple, list[int]] = {}
    for k, (n, m, fam, _) in enumerate(plan):
        groups.setdefault((n, fam), []).append(k)
    for (n, fam), members in groups.items():
        phis = _stream_phis(fam, n)
        P = np.stack([phi.matrix() for phi in phis])            # (F, n, n)
        moves = P - np.eye(n)[None]
        B, F = len(members), len(phis)
        M = np.array([plan[k][1] for k in members])
        mmax = int(M.max())
        live = np.arange(mmax)[None, :] < M[:, None]            # (B, mmax)
        x = np.zeros((B, F, mmax))
        regret = np.zeros((B, F, mmax))
        W = np.stack([plan[k][3].random((rounds, mmax)) for k in members]) * live[:, None, :]
        V = np.stack([plan[k][3].uniform(-U, U, size=(rounds, n)) for k in members])
        for t in range(rounds):
            w, v = W[:, t], V[:, t]
            y = np.einsum("bm,bfm->bf", w, np.maximum(x, 0.0))
            z = y.sum(axis=1)
            sig = np.full((B, n), 1.0 / n)
            on = z > 0
            if on.any() and fam == "external":
                # phi_a sends everything to a: the fixed point is y / z itself
                sig[on] = y[on] / z[on, None]
            elif on.any():
                A = np.einsum("bf,fij->bij", y[on], P) / z[on, None, None]
                sig[on] = stationary_batch(A)
            # rho(phi) = E_{phi(sigma)} v - E_sigma v
            rho = np.einsum("fij,bj,bi->bf", moves, sig, v)
            inc = w[:, None, :] * rho[:, :, None]
            x += inc
            regret += inc
        for b, k in enumerate(members):
            n_, m, fam_, _ = plan[k]
            om = omega(phis, n)
            out[k] = {"stream": k, "actions": n, "keys": m, "family": fam,
                      "max_regret": float(regret[b][:, :m].max()),
                      "bound": float(regret_bound(U, m, om, rounds))}
    return out


# ---------------------------------------------------------------- reports
AUDIT_TOKENS = ("cf", "cf_in", "act_blind", "act_in", "bps", "cfps", "csps", "tips", "bhv")


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


def bound_audit(game: Game, token: str, rounds: int = 1000, early: int = 10,
                variant: str = "rm") -> dict:
    """Self-play one type, then measure cumulative full regret against the
    type's own deviation set at every information set of every player."""
    from .learner import efr_regret_bound, self_play

    check_oracle_game(game)
    learners, profiles = self_play(game, token, rounds, variant)
    out = {"token": token, "rounds": rounds, "players": []}
    for p in range(game.num_players):
        maps = audit_maps(game, p, token)
        audit = FullRegretAudit(game, p, maps)
        gap_early = None
        for t, prof in enumerate(profiles):
            audit.observe(prof)
            if t + 1 == early:
                gap_early = audit.gap()
        cum = audit.cumulative()
        out["players"].append({
            "player": p, "num_maps": len(maps),
            "max_cumulative": float(cum.max()) if cum.size else 0.0,
            "bound": efr_regret_bound(learners[p], rounds),
            "gap_early": gap_early, "gap_final": audit.gap(),
        })
    return out


def _decay_ok(early, final, ratio=0.25):
    return final <= ratio * early if early > 0 else final <= 0


def decomposition_audit(game: Game, pairs: int = 50, seed: int = 0) -> tuple[float, float]:
    """Worst |lhs - rhs| of the successor decomposition and of the three-case
    split over seeded random (deviation, profile) pairs, scaled by U."""
    rng = np.random.default_rng(seed)
    worst_d = worst_c = 0.0
    for k in range(pairs):
        prof = random_profile(game, rng, sparsity=0.25 if k % 2 else 0.0)
        p = k % game.num_players
        dv = DeviationValues(game, random_behavioral_deviation(game, p, rng), prof)
        for iid in game.player_infosets[p]:
            for mem in dv.dev.realizable_memories(int(iid)):
                a, b = dv.decomposition(int(iid), mem)
                c, d = dv.recorrelation_cases(int(iid), mem)
                worst_d, worst_c = max(worst_d, abs(a - b)), max(worst_c, abs(c - d))
    U = max(game.utility_bound, 1e-300)
    return worst_d / U, worst_c / U


def count_audit(game: Game) -> list[tuple]:
    """(player, family, count or None, bound) for every family; None when the
    family cannot be enumerated within budget."""
    from .deviations import FAMILIES, DeviationTypeConfig, count_bound, count_deviations

    rows = []
    for p in range(game.num_players):
        cfg = DeviationTypeConfig(game, p, "bhv")
        for fam in FAMILIES:
            try:
                cnt = count_deviations(fam, game, p)
            except BudgetExceeded:
                cnt = None
            rows.append((p, fam, cnt, count_bound(fam, cfg.d_star, cfg.n, cfg.num_infosets)))
    return rows


def weight_audit(game: Game) -> list[tuple]:
    """(player, token, measured max |W|, table max |W|)."""
    from .deviations import TOKENS, DeviationTypeConfig

    rows = []
    for p in range(game.num_players):
        for tok in TOKENS:
            cfg = DeviationTypeConfig(game, p, tok)
            rows.append((p, tok, cfg.max_W(), cfg.table_constants()["max_W"]))
    return rows


def run_audit(game: Game, rounds: int = 1000, seed: int = 0, tokens=AUDIT_TOKENS) -> list[Check]:
    """Every auditable property on one oracle game, as a pass/fail table."""
    check_oracle_game(game)
    checks = []
    tol = 1e-10
    dec, cases = decomposition_audit(game, 50, seed)
    checks.append(Check("decomposition", dec <= tol, f"max |lhs-rhs|/U = {dec:.2e}"))
    checks.append(Check("three-case split", cases <= tol, f"max |lhs-rhs|/U = {cases:.2e}"))
    rng = np.random.default_rng(seed)
    play = EmpiricalPlay(game, [random_profile(game, rng) for _ in range(10)])
    mu = play.distribution()
    sp = PureStrategySpace(game, 0)
    img = rng.integers(sp.size, size=sp.size)
    try:
        deviation_incentive(play, 0, img)
        ok, det = abs(mu.sum() - 1) <= 1e-9, f"sum mu = {mu.sum():.12f}"
    except ArithmeticError as e:
        ok, det = False, str(e)
    checks.append(Check("average-regret identity", ok, det))
    for tok in tokens:
        res = bound_audit(game, tok, rounds)
        for pr in res["players"]:
            p = pr["player"]
            checks.append(Check(f"regret bound {tok} p{p}", pr["max_cumulative"] <= pr["bound"],
                                f"{pr['max_cumulative']:.4g} <= {pr['bound']:.4g}"))
            checks.append(Check(f"gap decay {tok} p{p}", _decay_ok(pr["gap_early"], pr["gap_final"]),
                                f"{pr['gap_final']:.3g} vs {pr['gap_early']:.3g} at T=10"))
    for p, fam, cnt, bound in count_audit(game):
        if cnt is None:
            checks.append(Check(f"count {fam} p{p}", True, "not enumerable within budget (skipped)"))
        else:
            checks.append(Check(f"count {fam} p{p}", cnt <= bound, f"{cnt} <= {bound}"))
    for p, tok, got, want in weight_audit(game):
        checks.append(Check(f"max |W| {tok} p{p}", got == want, f"{got} == {want}"))
    return checks


def format_checks(checks) -> str:
    width = max(len(c.name) for c in checks) if checks else 0
    return "\n".join(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.detail}"
                     for c in checks)
