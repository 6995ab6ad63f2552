"""Action transformations, behavioral deviations and deviation-type catalogs.

A *pure strategy* of player ``p`` is an integer vector holding one action per
information set of ``p``, in the order of ``game.player_infosets[p]`` (the
*local* index).  Deviations of the classic types are parameterized the same way
throughout: ``trigger`` is the information set where a deviation starts
(``I!!``), ``target`` the one where it ends (``I@``), actions are local action
indices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .game import BehavioralStrategy, Game, GameError

STAR = "*"
DEFAULT_BUDGET = 10**7


class BudgetExceeded(GameError):
    """Raised when an enumeration would need more pure-strategy evaluations than allowed."""


# ---------------------------------------------------------------- transformations
@dataclass(frozen=True)
class ActionTransformation:
    """identity, external (every action to ``dst``) or internal (``src`` to ``dst``)."""

    kind: str
    n: int
    src: int = -1
    dst: int = -1

    def __post_init__(self):
        if self.kind not in ("identity", "external", "internal"):
            raise GameError(f"unknown transformation kind {self.kind!r}")
        for a in (self.src, self.dst):
            if a >= self.n:
                raise GameError("transformation refers to an illegal action")

    @classmethod
    def identity(cls, n: int) -> "ActionTransformation":
        return cls("identity", n)

    @classmethod
    def external(cls, n: int, dst: int) -> "ActionTransformation":
        if n == 1:
            return cls.identity(1)
        return cls("external", n, -1, dst)

    @classmethod
    def internal(cls, n: int, src: int, dst: int) -> "ActionTransformation":
        if src == dst:
            return cls.identity(n)
        return cls("internal", n, src, dst)

    @property
    def is_identity(self) -> bool:
        return self.kind == "identity"

    def apply(self, a: int) -> int:
        if self.kind == "external":
            return self.dst
        if self.kind == "internal" and a == self.src:
            return self.dst
        return a

    def observe(self, a: int):
        """Memory symbol recorded when this transformation is applied to ``a``."""
        return STAR if self.kind == "external" else a

    def matrix(self) -> np.ndarray:
        """Column-stochastic ``M[a', a] = 1{phi(a) = a'}``."""
        m = np.zeros((self.n, self.n))
        for a in range(self.n):
            m[self.apply(a), a] = 1.0
        return m

    def apply_dist(self, sigma) -> np.ndarray:
        sigma = np.asarray(sigma, dtype=float)
        out = np.zeros(self.n)
        np.add.at(out, [self.apply(a) for a in range(self.n)], sigma)
        return out

    def __repr__(self) -> str:
        if self.kind == "identity":
            return "id"
        if self.kind == "external":
            return f"->{self.dst}"
        return f"{self.src}->{self.dst}"


def external_set(n: int) -> list[ActionTransformation]:
    return [ActionTransformation.external(n, a) for a in range(n)] if n > 1 else []


def internal_set(n: int) -> list[ActionTransformation]:
    return [ActionTransformation.internal(n, a, b) for a in range(n) for b in range(n) if a != b]


def omega(transformations, n: int) -> int:
    """Maximal activation: the largest number of transformations moving one action."""
    if not transformations:
        return 0
    return max(sum(phi.apply(a) != a for phi in transformations) for a in range(n))


# ---------------------------------------------------------------- time selection
@dataclass(frozen=True)
class TimeSelectionKey:
    """``const`` (t -> 1), ``reach`` (P(h(I); pi)), ``reach_action``
    (P(h(I); pi) pi(a | I)) or ``memory`` (product of pi(a_k | I_k) along a chain
    starting at a forest root)."""

    kind: str
    infoset: int = -1
    action: int = -1
    chain: tuple = ()

    def factors(self, game: Game) -> tuple[int, ...]:
        """Global strategy slots whose product is the key's weight."""
        if self.kind == "const":
            return ()
        if self.kind == "memory":
            return tuple(int(game.slot_offset[i]) + a for i, a in self.chain)
        path = tuple(int(game.slot_offset[i]) + a for i, a in game.infoset_path(self.infoset))
        if self.kind == "reach":
            return path
        if self.kind == "reach_action":
            return path + (int(game.slot_offset[self.infoset]) + self.action,)
        raise GameError(f"unknown key kind {self.kind!r}")

    def __repr__(self) -> str:
        if self.kind == "const":
            return "1"
        if self.kind == "reach":
            return f"P(I{self.infoset})"
        if self.kind == "reach_action":
            return f"P(I{self.infoset})pi({self.action}|I{self.infoset})"
        return "mem" + "".join(f"[I{i}:{a}]" for i, a in self.chain)


CONST = TimeSelectionKey("const")


def key_weight(key: TimeSelectionKey, game: Game, strategy: BehavioralStrategy) -> float:
    lo = game.player_slot_range[strategy.player][0]
    w = 1.0
    for s in key.factors(game):
        w *= strategy.probs[s - lo]
    return float(w)


# ---------------------------------------------------------------- type catalog
@dataclass(frozen=True)
class TypeInfo:
    token: str
    name: str
    phi: str        # "ex", "in" or "exin"
    weights: str    # see DeviationTypeConfig.time_selection_keys
    base: str       # enumerable family used for audits and counts


TYPES = {
    "bhv": TypeInfo("bhv", "behavioral", "in", "memory", "stbhv"),
    "tips": TypeInfo("tips", "TIPS", "in", "reach_action", "tips"),
    "csps": TypeInfo("csps", "CSPS", "exin", "csps", "csps"),
    "cfps": TypeInfo("cfps", "CFPS", "in", "reach_upto", "cfps"),
    "bps": TypeInfo("bps", "BPS", "ex", "reach_upto", "bps"),
    "act_in": TypeInfo("act_in", "informed action", "in", "reach_self", "action_in"),
    "act_blind": TypeInfo("act_blind", "blind action", "ex", "reach_self", "action_blind"),
    "cf_in": TypeInfo("cf_in", "informed CF", "in", "const", "cf_in"),
    "cf": TypeInfo("cf", "blind CF", "ex", "const", "cf_blind"),
    "cf_exin": TypeInfo("cf_exin", "CF ex+in", "exin", "const", "cf_in"),
    "cfps_exin": TypeInfo("cfps_exin", "CFPS ex+in", "exin", "reach_upto", "cfps"),
    "tips_exin": TypeInfo("tips_exin", "TIPS ex+in", "exin", "reach_action", "tips"),
}
TOKENS = tuple(TYPES)
TABLE1_TOKENS = ("act_in", "cf", "cf_in", "bps", "cfps", "csps", "tips", "bhv")
EXIN_TOKENS = ("cf_exin", "cfps_exin", "tips_exin")


def table_constants(token: str, d_star: int, n: int) -> dict:
    """max |W|, D and n_IN from the EFR parameter table (EX+IN variants reuse
    their base row with |Phi_I| = n^2)."""
    ni = n * n - n
    rows = {
        "bhv": (n ** d_star, n ** d_star * ni, d_star),
        "tips": (d_star * n + 1, (d_star * n + 1) * ni, 1),
        "csps": (d_star * n, d_star * n * (n * n - 2), 1),
        "cfps": (d_star + 1, (d_star + 1) * ni, 0),
        "bps": (d_star + 1, (d_star + 1) * (n - 1), 0),
        "act_in": (1, ni, 0),
        "act_blind": (1, n - 1, 0),
        "cf_in": (1, ni, 0),
        "cf": (1, n - 1, 0),
        "cf_exin": (1, n * n, 0),
        "cfps_exin": (d_star + 1, (d_star + 1) * n * n, 0),
        "tips_exin": (d_star * n + 1, (d_star * n + 1) * n * n, 1),
    }
    if token not in rows:
        raise GameError(f"unknown deviation type {token!r}")
    w, d, nin = rows[token]
    return {"max_W": w, "D": d, "n_IN": nin}


def count_bound(family: str, d_star: int, n: int, num_infosets: int) -> float:
    """Dominant-term size of each deviation family (lower-order terms dropped)."""
    m = num_infosets
    table = {
        "internal": n ** (2 * m),
        "external": n ** m,
        "stbhv": n ** (d_star + 2) * m,
        "tips": d_star * n ** 3 * m,
        "csps": d_star * n ** 2 * m,
        "cfps": d_star * n ** 2 * m,
        "bps": d_star * n * m,
        "causal_in": n ** (m + 1) * m,
        "action_in": n ** 2 * m,
        "cf_in": n ** 2 * m,
        "causal_blind": n ** m * m,
        "action_blind": n * m,
        "cf_blind": n * m,
    }
    return table[family]


class DeviationTypeConfig:
    """Per-information-set transformation sets and time-selection keys of one type."""

    def __init__(self, game: Game, player: int, token: str):
        if token not in TYPES:
            raise GameError(f"unknown deviation type {token!r}; expected one of {TOKENS}")
        self.game, self.player, self.token = game, player, token
        self.info = TYPES[token]
        ids = game.player_infosets[player]
        self.d_star = game.max_depth(player)
        self.n = game.max_actions(player)
        self.num_infosets = len(ids)

    def transformations_at(self, iid: int) -> list[ActionTransformation]:
        n = self.game.infosets[iid].num_actions
        if self.info.phi == "ex":
            return external_set(n)
        if self.info.phi == "in":
            return internal_set(n)
        return external_set(n) + internal_set(n)

    def time_selection_keys(self, iid: int, phi: ActionTransformation) -> list[TimeSelectionKey]:
        g = self.game
        if phi not in self.transformations_at(iid):
            raise GameError(f"{phi!r} is not in the transformation set at {iid}")
        path = g.infoset_path(iid)
        kind = self.info.weights
        if kind == "const":
            keys = [CONST]
        elif kind == "reach_self":
            keys = [TimeSelectionKey("reach", iid)]
        elif kind == "reach_upto":
            keys = [CONST] + [TimeSelectionKey("reach", j) for j, _ in path] + \
                   [TimeSelectionKey("reach", iid)]
        elif kind == "reach_action":
            keys = [CONST] + [TimeSelectionKey("reach_action", j, a)
                              for j, _ in path for a in range(g.infosets[j].num_actions)]
        elif kind == "csps":
            if phi.kind == "external":
                keys = [TimeSelectionKey("reach_action", j, a)
                        for j, _ in path for a in range(g.infosets[j].num_actions)]
            else:
                keys = [TimeSelectionKey("reach", iid)]
        elif kind == "memory":
            chains = itertools.product(*[range(g.infosets[j].num_actions) for j, _ in path])
            keys = [TimeSelectionKey("memory", chain=tuple(zip([j for j, _ in path], c)))
                    for c in chains]
        else:
            raise GameError(f"unknown weight family {kind!r}")
        return _dedup_keys(g, keys)

    def pairs(self, iid: int) -> list[tuple[ActionTransformation, TimeSelectionKey]]:
        return [(phi, k) for phi in self.transformations_at(iid)
                for k in self.time_selection_keys(iid, phi)]

    def max_W(self) -> int:
        best = 0
        for iid in self.game.player_infosets[self.player]:
            for phi in self.transformations_at(int(iid)):
                best = max(best, len(self.time_selection_keys(int(iid), phi)))
        return best

    def measured_D(self) -> int:
        """max over I, phi_I of |W_I(phi_I)| * omega(Phi_I)."""
        best = 0
        for iid in self.game.player_infosets[self.player]:
            phis = self.transformations_at(int(iid))
            om = omega(phis, self.game.infosets[iid].num_actions)
            for phi in phis:
                best = max(best, len(self.time_selection_keys(int(iid), phi)) * om)
        return best

    def table_constants(self) -> dict:
        return table_constants(self.token, self.d_star, self.n)

    def __repr__(self) -> str:
        return f"DeviationTypeConfig({self.token!r}, player={self.player})"


def _dedup_keys(game, keys):
    seen, out = set(), []
    for k in keys:
        f = k.factors(game)
        if f not in seen:
            seen.add(f)
            out.append(k)
    return out


# ---------------------------------------------------------------- behavioral deviations
class BehavioralDeviation:
    """Transformation for each (information set, memory state); identity if unset.

    Memory states are tuples with one symbol per own predecessor: an action
    index or :data:`STAR`.
    """

    def __init__(self, game: Game, player: int, table: dict | None = None):
        self.game, self.player = game, player
        self.table = dict(table or {})

    def __getitem__(self, key) -> ActionTransformation:
        iid, g = key
        phi = self.table.get((iid, tuple(g)))
        return phi if phi is not None else ActionTransformation.identity(
            self.game.infosets[iid].num_actions)

    def __setitem__(self, key, phi: ActionTransformation):
        iid, g = key
        self.table[(iid, tuple(g))] = phi

    def realizable_memories(self, iid: int) -> set[tuple]:
        mems = {()}
        for j, a in self.game.infoset_path(iid):
            nxt = set()
            for g in mems:
                phi = self[j, g]
                for b in range(phi.n):
                    if phi.apply(b) == a:
                        nxt.add(g + (phi.observe(b),))
            mems = nxt
        return mems

    def memory_probability(self, iid: int, g, strategy: BehavioralStrategy) -> float:
        g = tuple(g)
        path = self.game.infoset_path(iid)
        if len(g) != len(path):
            raise GameError(f"memory {g} has the wrong length for information set {iid}")
        w = 1.0
        for k, (j, a) in enumerate(path):
            phi = self[j, g[:k]]
            sigma = strategy[j]
            if g[k] != STAR and not 0 <= g[k] < phi.n:
                raise GameError(f"symbol {g[k]!r} is not an action of information set {j}")
            w *= sum(sigma[b] for b in range(phi.n)
                     if phi.apply(b) == a and phi.observe(b) == g[k])
        return w

    def apply_pure(self, S: np.ndarray) -> np.ndarray:
        """Image of each row of ``S`` (pure strategies, local indexing).  The memory
        at each information set is built along its path, as if the deviator had
        travelled there."""
        g = self.game
        ids = g.player_infosets[self.player]
        base = int(ids[0])
        S = np.atleast_2d(S)
        out = S.copy()
        by_info: dict[int, list] = {}
        for (iid, mem), phi in self.table.items():
            if not phi.is_identity:
                by_info.setdefault(iid, []).append((mem, phi))
        if not by_info:
            return out
        # memory symbols along each row: obs[k][r] is what would be observed at local k
        obs: dict[int, np.ndarray] = {}
        mem_of: dict[int, list] = {}
        for iid in ids:
            iid = int(iid)
            k = iid - base
            meta = g.infosets[iid]
            if meta.parent is None:
                mem_rows = [()] * len(S)
            else:
                pk = meta.parent - base
                mem_rows = [m + (o,) for m, o in zip(mem_of[pk], obs[pk])]
            mem_of[k] = mem_rows
            col = S[:, k]
            o = list(col)
            if iid in by_info:
                rules = dict(by_info[iid])
                newcol = col.copy()
                for r, m in enumerate(mem_rows):
                    phi = rules.get(m)
                    if phi is not None:
                        newcol[r] = phi.apply(int(col[r]))
                        o[r] = phi.observe(int(col[r]))
                out[:, k] = newcol
            obs[k] = o
        return out


# ---------------------------------------------------------------- pure strategies
class PureStrategySpace:
    """All pure strategies of one player as an ``(N, m)`` action matrix."""

    def __init__(self, game: Game, player: int, budget: int = DEFAULT_BUDGET):
        self.game, self.player = game, player
        ids = game.player_infosets[player]
        self.ids = ids
        self.base = int(ids[0]) if len(ids) else 0
        self.radix = game.num_actions[ids].astype(np.int64)
        size = int(np.prod(self.radix, dtype=float)) if len(ids) else 1
        if size > budget:
            raise BudgetExceeded(f"{size} pure strategies exceed the budget of {budget}")
        self.size = size
        grids = np.indices(tuple(self.radix)).reshape(len(ids), -1).T if len(ids) else np.zeros((1, 0), int)
        self.S = np.ascontiguousarray(grids, dtype=np.int64)
        # mixed-radix weights so that index(S[r]) == r
        w = np.ones(len(ids), dtype=np.int64)
        for k in range(len(ids) - 2, -1, -1):
            w[k] = w[k + 1] * self.radix[k + 1]
        self.place = w
        self.pred = np.zeros((len(ids), len(ids)), dtype=bool)   # pred[k, j]: j strictly precedes k
        self.path_action = np.full((len(ids), len(ids)), -1)     # action at j towards k
        for k, iid in enumerate(ids):
            for j, a in game.infoset_path(int(iid)):
                self.pred[k, j - self.base] = True
                self.path_action[k, j - self.base] = a

    def index(self, S: np.ndarray) -> np.ndarray:
        return S @ self.place

    def reachable(self, S: np.ndarray) -> np.ndarray:
        """``ok[r, k]``: strategy ``S[r]`` plays towards information set ``k``."""
        hit = (S[:, None, :] == self.path_action[None, :, :]) | ~self.pred[None, :, :]
        return hit.all(axis=2)

    def canonical(self, S: np.ndarray) -> np.ndarray:
        """Zero the actions at information sets a strategy cannot reach, so that
        realization-equivalent strategies coincide."""
        return np.where(self.reachable(S), S, 0)

    def local(self, iid: int) -> int:
        return int(iid) - self.base

    def path(self, k: int) -> list[tuple[int, int]]:
        js = np.flatnonzero(self.pred[k])
        return [(int(j), int(self.path_action[k, j])) for j in js]

    def subtree(self, k: int) -> np.ndarray:
        """Local indices of information sets at or below ``k``."""
        return np.flatnonzero(self.pred[:, k] | (np.arange(len(self.ids)) == k))

    def substrategies(self, k: int) -> np.ndarray:
        cols = self.subtree(k)
        return np.indices(tuple(self.radix[cols])).reshape(len(cols), -1).T

    def strategy_probs(self, strategy: BehavioralStrategy) -> np.ndarray:
        """Mixed-strategy weight of each pure strategy (product over all sets)."""
        g = self.game
        lo = g.player_slot_range[self.player][0]
        slots = g.slot_offset[self.ids] - lo
        return np.prod(strategy.probs[slots[None, :] + self.S], axis=1)

    def terminal_reach(self) -> tuple[np.ndarray, np.ndarray]:
        """``R[s, z] = P(z; s)`` restricted to the player's own actions, and the
        terminal ids ``z``."""
        g = self.game
        zs = g.terminals
        R = np.ones((self.size, len(zs)))
        for col, z in enumerate(zs):
            h = int(z)
            while h != 0:
                par = int(g.parent[h])
                if g.actor[par] == self.player:
                    k = int(g.infoset[par]) - self.base
                    R[:, col] *= self.S[:, k] == g.action[h]
                h = par
        return R, zs


# ---------------------------------------------------------------- deviation specs
@dataclass(frozen=True)
class Deviation:
    """One deviation of a named family with its parameters (local indices).

    Families: ``stbhv`` (single-target behavioral), ``tips``, ``csps``, ``cfps``,
    ``bps``, ``causal_in``, ``causal_blind``, ``action_in``, ``action_blind``,
    ``cf_in``, ``cf_blind``, ``external`` and ``internal``.
    """

    family: str
    trigger: int = -1
    trigger_action: int = -1
    target: int = -1
    target_action: int = -1
    target_trigger: int = -1
    triggers: tuple = ()
    strategy: tuple = ()       # s' for causal/external/internal families
    source: tuple = ()         # s!! for the internal family

    def validate(self, space: PureStrategySpace):
        f = self.family
        m = len(space.ids)
        need_target = f in ("stbhv", "tips", "csps", "cfps", "bps", "cf_in", "cf_blind")
        need_trigger = f in ("tips", "csps", "cfps", "bps", "causal_in", "causal_blind",
                             "action_in", "action_blind")
        if f not in FAMILIES:
            raise GameError(f"unknown deviation family {f!r}")
        if need_target and not 0 <= self.target < m:
            raise GameError(f"{f} needs a target information set")
        if need_trigger and not 0 <= self.trigger < m:
            raise GameError(f"{f} needs a trigger information set")
        if need_target and need_trigger and self.trigger != self.target \
                and not space.pred[self.target, self.trigger]:
            raise GameError(f"{f}: trigger must precede or equal the target")
        if f == "tips" and self.trigger == self.target and self.trigger_action != self.target_trigger:
            raise GameError("tips: a shared trigger/target needs one trigger action")
        if f == "stbhv" and len(self.triggers) != len(space.path(self.target)) + 1:
            raise GameError("stbhv: one trigger action per set on the path, target included")

    def apply(self, space: PureStrategySpace, S: np.ndarray | None = None) -> np.ndarray:
        """Table of case analyses for every family, applied row-wise."""
        if S is None:
            S = space.S
        self.validate(space)
        f = self.family
        out = S.copy()
        rows = np.ones(len(S), dtype=bool)
        if f in ("tips", "csps", "causal_in", "action_in"):
            rows = S[:, self.trigger] == self.trigger_action

        if f in ("cf_blind", "cf_in", "bps", "cfps", "csps", "tips"):
            start = -1 if f in ("cf_blind", "cf_in") else self.trigger
            seg = [(j, a) for j, a in space.path(self.target)
                   if start < 0 or j == start or space.pred[j, start]]
            for j, a in seg:
                out[rows, j] = a
            t = self.target
            if f in ("cf_in", "cfps", "tips"):
                hit = rows & (S[:, t] == self.target_trigger)
            else:
                hit = rows
            out[hit, t] = self.target_action
        elif f in ("action_blind", "action_in"):
            out[rows, self.trigger] = self.target_action
        elif f in ("causal_blind", "causal_in"):
            cols = space.subtree(self.trigger)
            out[np.ix_(rows, cols)] = np.asarray(self.strategy)[None, :]
        elif f == "stbhv":
            path = space.path(self.target) + [(self.target, self.target_action)]
            ok = np.ones(len(S), dtype=bool)
            for (j, a), trig in zip(path, self.triggers):
                ok = ok & (S[:, j] == trig)
                out[ok, j] = a
        elif f == "external":
            out[:] = np.asarray(self.strategy)[None, :]
        elif f == "internal":
            hit = np.all(S == np.asarray(self.source)[None, :], axis=1)
            out[hit] = np.asarray(self.strategy)
        return out

    def embedding(self, space: PureStrategySpace) -> BehavioralDeviation:
        """Equivalent behavioral deviation (not available for external/internal)."""
        self.validate(space)
        g, f, base = space.game, self.family, space.base
        dev = BehavioralDeviation(g, space.player)
        n = lambda k: int(space.radix[k])
        gid = lambda k: k + base

        def path_mem(k):
            return tuple(a for _, a in space.path(k))

        if f in ("cf_blind", "cf_in", "bps", "cfps", "csps", "tips"):
            path = space.path(self.target)
            if f in ("cf_blind", "cf_in"):
                start_pos = 0
            else:
                start_pos = [j for j, _ in path].index(self.trigger) if self.trigger != self.target \
                    else len(path)
            mem = tuple(a for _, a in path[:start_pos])
            for pos in range(start_pos, len(path)):
                j, a = path[pos]
                if pos == start_pos and f in ("csps", "tips"):
                    dev[gid(j), mem] = ActionTransformation.internal(n(j), self.trigger_action, a)
                    mem = mem + (self.trigger_action,)
                else:
                    dev[gid(j), mem] = ActionTransformation.external(n(j), a)
                    mem = mem + (STAR,) if n(j) > 1 else mem + (a,)
            t = self.target
            first_here = start_pos == len(path)
            if f in ("cf_in", "cfps") or (f == "tips" and not first_here):
                dev[gid(t), mem] = ActionTransformation.internal(n(t), self.target_trigger,
                                                                 self.target_action)
            elif f == "tips" and first_here:
                dev[gid(t), mem] = ActionTransformation.internal(n(t), self.trigger_action,
                                                                 self.target_action)
            elif f == "csps" and first_here:
                dev[gid(t), mem] = ActionTransformation.internal(n(t), self.trigger_action,
                                                                 self.target_action)
            else:
                dev[gid(t), mem] = ActionTransformation.external(n(t), self.target_action)
        elif f in ("action_blind", "action_in"):
            k = self.trigger
            if f == "action_blind":
                dev[gid(k), path_mem(k)] = ActionTransformation.external(n(k), self.target_action)
            else:
                dev[gid(k), path_mem(k)] = ActionTransformation.internal(
                    n(k), self.trigger_action, self.target_action)
        elif f in ("causal_blind", "causal_in"):
            cols = list(space.subtree(self.trigger))
            choice = dict(zip(cols, self.strategy))
            k = self.trigger
            root_mem = path_mem(k)
            if f == "causal_blind":
                dev[gid(k), root_mem] = ActionTransformation.external(n(k), choice[k])
                first_obs = STAR if n(k) > 1 else choice[k]
            else:
                dev[gid(k), root_mem] = ActionTransformation.internal(n(k), self.trigger_action,
                                                                      choice[k])
                first_obs = self.trigger_action
            for c in cols:
                if c == k:
                    continue
                cpath = space.path(c)
                pos = [j for j, _ in cpath].index(k)
                mem = root_mem + (first_obs,) + tuple(
                    STAR if n(j) > 1 else a for j, a in cpath[pos + 1:])
                dev[gid(c), mem] = ActionTransformation.external(n(c), choice[c])
        elif f == "stbhv":
            path = space.path(self.target) + [(self.target, self.target_action)]
            mem: tuple = ()
            for (j, a), trig in zip(path, self.triggers):
                dev[gid(j), mem] = ActionTransformation.internal(n(j), trig, a)
                mem = mem + (trig,)
        else:
            raise GameError(f"{f} deviations have no behavioral embedding")
        return dev


FAMILIES = ("stbhv", "tips", "csps", "cfps", "bps", "causal_in", "causal_blind", "action_in",
            "action_blind", "cf_in", "cf_blind", "external", "internal")

# families of deviations a token's learner is measured against
AUDIT_FAMILIES = {
    "bhv": ("stbhv", "behavioral"),
    "tips": ("tips",), "csps": ("csps",), "cfps": ("cfps",), "bps": ("bps",),
    "act_in": ("action_in",), "act_blind": ("action_blind",),
    "cf_in": ("cf_in",), "cf": ("cf_blind",),
    "cf_exin": ("cf_in", "cf_blind"), "cfps_exin": ("cfps", "bps"), "tips_exin": ("tips", "csps"),
}


def enumerate_family(space: PureStrategySpace, family: str) -> Iterator[Deviation]:
    """Every parameterization of a family (duplicates included)."""
    m = len(space.ids)
    rad = [int(r) for r in space.radix]
    ups = lambda k: [j for j, _ in space.path(k)] + [k]   # trigger candidates for target k
    if family == "cf_blind":
        for t in range(m):
            for a in range(rad[t]):
                yield Deviation(family, target=t, target_action=a)
    elif family == "cf_in":
        for t in range(m):
            for b in range(rad[t]):
                for a in range(rad[t]):
                    if a != b:
                        yield Deviation(family, target=t, target_action=a, target_trigger=b)
    elif family == "action_blind":
        for k in range(m):
            for a in range(rad[k]):
                yield Deviation(family, trigger=k, target_action=a)
    elif family == "action_in":
        for k in range(m):
            for b in range(rad[k]):
                for a in range(rad[k]):
                    if a != b:
                        yield Deviation(family, trigger=k, trigger_action=b, target_action=a)
    elif family == "bps":
        for t in range(m):
            for k in ups(t):
                for a in range(rad[t]):
                    yield Deviation(family, trigger=k, target=t, target_action=a)
    elif family == "cfps":
        for t in range(m):
            for k in ups(t):
                for b in range(rad[t]):
                    for a in range(rad[t]):
                        if a != b:
                            yield Deviation(family, trigger=k, target=t, target_action=a,
                                            target_trigger=b)
    elif family == "csps":
        for t in range(m):
            for k in ups(t):
                for b in range(rad[k]):
                    for a in range(rad[t]):
                        yield Deviation(family, trigger=k, trigger_action=b, target=t,
                                        target_action=a)
    elif family == "tips":
        for t in range(m):
            for k in ups(t):
                for b in range(rad[k]):
                    for c in range(rad[t]):
                        if k == t and c != b:
                            continue
                        for a in range(rad[t]):
                            yield Deviation(family, trigger=k, trigger_action=b, target=t,
                                            target_action=a, target_trigger=c)
    elif family == "stbhv":
        for t in range(m):
            chain = ups(t)
            for trig in itertools.product(*[range(rad[j]) for j in chain]):
                for a in range(rad[t]):
                    yield Deviation(family, target=t, target_action=a, triggers=trig)
    elif family in ("causal_blind", "causal_in"):
        for k in range(m):
            subs = space.substrategies(k)
            acts = range(rad[k]) if family == "causal_in" else [-1]
            for b in acts:
                for sp in subs:
                    yield Deviation(family, trigger=k, trigger_action=b, strategy=tuple(int(x) for x in sp))
    elif family == "external":
        for s in space.S:
            yield Deviation(family, strategy=tuple(int(x) for x in s))
    elif family == "internal":
        for s in space.S:
            for s2 in space.S:
                if not np.array_equal(s, s2):
                    yield Deviation(family, source=tuple(int(x) for x in s),
                                    strategy=tuple(int(x) for x in s2))
    else:
        raise GameError(f"unknown deviation family {family!r}")


def family_size(space: PureStrategySpace, family: str) -> int:
    """Number of parameterizations, computed without enumerating them."""
    m = len(space.ids)
    rad = [int(r) for r in space.radix]
    depth = [len(space.path(k)) for k in range(m)]
    if family == "cf_blind" or family == "action_blind":
        return sum(rad)
    if family in ("cf_in", "action_in"):
        return sum(r * (r - 1) for r in rad)
    if family == "bps":
        return sum((depth[t] + 1) * rad[t] for t in range(m))
    if family == "cfps":
        return sum((depth[t] + 1) * rad[t] * (rad[t] - 1) for t in range(m))
    if family in ("csps", "tips"):
        tot = 0
        for t in range(m):
            for k in [j for j, _ in space.path(t)] + [t]:
                tot += rad[k] * rad[t] * (rad[t] if family == "tips" and k != t else 1)
        return tot
    if family == "stbhv":
        return sum(int(np.prod([rad[j] for j, _ in space.path(t)] + [rad[t]])) * rad[t]
                   for t in range(m))
    if family in ("causal_blind", "causal_in"):
        tot = 0
        for k in range(m):
            sub = int(np.prod(space.radix[space.subtree(k)], dtype=float))
            tot += sub * (rad[k] if family == "causal_in" else 1)
        return tot
    if family == "external":
        return space.size
    if family == "internal":
        return space.size * (space.size - 1)
    raise GameError(f"unknown deviation family {family!r}")


def enumerate_behavioral(space: PureStrategySpace, internal_only: bool = True) -> Iterator[BehavioralDeviation]:
    """All behavioral deviations built from (identity and) internal transformations,
    assigned only at realizable memory states."""
    g = space.game
    order = [int(i) for i in space.ids]

    def rec(pos, dev):
        if pos == len(order):
            yield BehavioralDeviation(g, space.player, dev.table)
            return
        iid = order[pos]
        mems = sorted(dev.realizable_memories(iid), key=repr)
        n = g.infosets[iid].num_actions
        options = [ActionTransformation.identity(n)] + internal_set(n)
        if not internal_only:
            options += external_set(n)
        for combo in itertools.product(options, repeat=len(mems)):
            d2 = BehavioralDeviation(g, space.player, dev.table)
            for mem, phi in zip(mems, combo):
                if not phi.is_identity:
                    d2[iid, mem] = phi
            yield from rec(pos + 1, d2)

    yield from rec(0, BehavioralDeviation(g, space.player))


def deviation_maps(space: PureStrategySpace, families, budget: int = DEFAULT_BUDGET,
                   include_identity: bool = False) -> np.ndarray:
    """Distinct pure-strategy maps of the given families as an ``(K, N)`` array of
    image indices, sorted lexicographically.  Images are canonical (see
    :meth:`PureStrategySpace.canonical`) and maps equivalent to the identity are
    dropped unless requested."""
    N = space.size
    ident = space.index(space.canonical(space.S))
    seen: dict[bytes, np.ndarray] = {}
    used = 0
    for fam in families:
        if fam == "behavioral":
            it = (d.apply_pure(space.S) for d in enumerate_behavioral(space))
        else:
            if family_size(space, fam) * N > budget:
                raise BudgetExceeded(f"{fam}: {family_size(space, fam)} deviations x {N} strategies")
            it = (d.apply(space) for d in enumerate_family(space, fam))
        for img in it:
            used += N
            if used > budget:
                raise BudgetExceeded(f"enumeration exceeded {budget} pure-strategy evaluations")
            idx = space.index(space.canonical(img))
            key = idx.tobytes()
            if key not in seen:
                seen[key] = idx
    maps = [v for v in seen.values() if include_identity or not np.array_equal(v, ident)]
    if not maps:
        return np.zeros((0, N), dtype=np.int64)
    out = np.array(maps, dtype=np.int64)
    return out[np.lexsort(out.T[::-1])]


def count_deviations(token_or_family: str, game: Game, player: int,
                     budget: int = DEFAULT_BUDGET) -> int:
    """Exact number of distinct pure-strategy maps, up to realization
    equivalence, excluding the identity."""
    space = PureStrategySpace(game, player, budget)
    fams = AUDIT_FAMILIES.get(token_or_family, (token_or_family,))
    return len(deviation_maps(space, fams, budget))


def realizable_memories(game: Game, player: int, family: str, iid: int,
                        budget: int = DEFAULT_BUDGET) -> set[tuple]:
    """Union of the realizable memory states at ``iid`` over a family's deviations."""
    space = PureStrategySpace(game, player, budget)
    out: set[tuple] = set()
    if family == "behavioral":
        devs = enumerate_behavioral(space)
    else:
        devs = (d.embedding(space) for d in enumerate_family(space, family))
    for dev in devs:
        out |= dev.realizable_memories(iid)
    return out


def pushforward(space: PureStrategySpace, image: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """``[phi pi](s') = sum over s with phi(s) = s' of pi(s)``."""
    out = np.zeros(space.size)
    np.add.at(out, image, weights)
    return out
