"""Explicit extensive-form games.

A :class:`Game` is an immutable, fully expanded game tree stored as flat numpy
arrays in breadth-first order, together with each player's information-set
forest.  Strategies are stored as flat probability vectors over *slots*, one
slot per (information set, action) pair; every player's information sets and
slots occupy a contiguous index range.

Players are numbered from 0.  The chance player is :data:`CHANCE`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

CHANCE = -1
TERMINAL = -2

PROB_DRIFT_RENORMALIZE = 1e-12
PROB_DRIFT_ERROR = 1e-6


class GameError(ValueError):
    """Raised for malformed games or invalid arguments to game queries."""


@dataclass
class InfoSetMeta:
    """Static description of one information set.

    ``children_by_action[a]`` is the set of the owner's information sets reached
    next after playing ``a`` here (``I_i(I, a)``) and ``terminal_successors[a]``
    the terminal histories reached without another decision of the owner
    (``Z_i(I, a)``).
    """

    id: int
    player: int
    key: Hashable
    actions: tuple[str, ...]
    histories: tuple[int, ...]
    depth: int = 0
    parent: int | None = None
    parent_action: int | None = None
    children_by_action: tuple[tuple[int, ...], ...] = ()
    terminal_successors: tuple[tuple[int, ...], ...] = ()
    slot_offset: int = 0

    @property
    def num_actions(self) -> int:
        return len(self.actions)


@dataclass
class _RawNode:
    parent: int
    label: str | None
    actor: int
    key: Hashable
    prob: float | None
    payoffs: tuple[float, ...] | None
    children: list[int] = field(default_factory=list)


class GameBuilder:
    """Incrementally describe a game tree, then :meth:`build` it.

    Children must be added in the order their actions should be listed.  The
    information set of a decision node is identified by ``(player, key)``.
    """

    def __init__(self, num_players: int, name: str = "game"):
        if num_players < 1:
            raise GameError("a game needs at least one player")
        self.num_players = num_players
        self.name = name
        self._nodes: list[_RawNode] = []

    def _add(self, parent, label, actor, key, prob, payoffs) -> int:
        if actor == TERMINAL:
            if payoffs is None or len(payoffs) != self.num_players:
                raise GameError("terminal histories need one payoff per player")
            payoffs = tuple(float(u) for u in payoffs)
        elif actor != CHANCE and not 0 <= actor < self.num_players:
            raise GameError(f"unknown actor {actor}")
        node = _RawNode(parent, label, actor, key, prob, payoffs)
        self._nodes.append(node)
        idx = len(self._nodes) - 1
        if parent >= 0:
            self._nodes[parent].children.append(idx)
        return idx

    def root(self, actor: int, key: Hashable = None, payoffs=None) -> int:
        if self._nodes:
            raise GameError("root already added")
        return self._add(-1, None, actor, key, None, payoffs)

    def child(self, parent: int, label: str, actor: int, key: Hashable = None,
              prob: float | None = None, payoffs: Sequence[float] | None = None) -> int:
        p = self._nodes[parent]
        if p.actor == TERMINAL:
            raise GameError("terminal histories have no children")
        if p.actor == CHANCE and prob is None:
            raise GameError("chance outcomes need a probability")
        return self._add(parent, str(label), actor, key, prob, payoffs)

    def build(self) -> "Game":
        return Game._from_raw(self._nodes, self.num_players, self.name)


class Game:
    """Immutable explicit extensive-form game.

    Node arrays (length ``num_nodes``, breadth-first order, root is 0):
    ``actor``, ``parent``, ``action`` (index of the edge in the parent's action
    list), ``depth``, ``infoset`` (-1 for chance/terminal), ``child_start`` and
    ``child_count`` (children are contiguous), ``chance_prob`` (probability of
    the edge into the node when its parent is a chance node, else 1) and
    ``utilities`` (``num_nodes x num_players``, zero off terminals).
    """

    def __init__(self):  # use GameBuilder / from_text
        raise TypeError("construct games through GameBuilder")

    # ------------------------------------------------------------------ build
    @classmethod
    def _from_raw(cls, raw: list[_RawNode], num_players: int, name: str) -> "Game":
        if not raw:
            raise GameError("empty game")
        self = object.__new__(cls)
        self.name = name
        self.num_players = num_players

        order = []
        queue = deque([0])
        while queue:
            i = queue.popleft()
            order.append(i)
            queue.extend(raw[i].children)
        new_id = {old: new for new, old in enumerate(order)}
        n = len(order)
        self.num_nodes = n

        actor = np.empty(n, dtype=np.int64)
        parent = np.full(n, -1, dtype=np.int64)
        action = np.full(n, -1, dtype=np.int64)
        depth = np.zeros(n, dtype=np.int64)
        child_start = np.zeros(n, dtype=np.int64)
        child_count = np.zeros(n, dtype=np.int64)
        chance_prob = np.ones(n)
        utilities = np.zeros((n, num_players))
        labels: list[str | None] = [None] * n
        keys: list[Hashable] = [None] * n

        for new, old in enumerate(order):
            node = raw[old]
            actor[new] = node.actor
            labels[new] = node.label
            keys[new] = node.key
            if node.children:
                child_start[new] = new_id[node.children[0]]
                child_count[new] = len(node.children)
                for a, c in enumerate(node.children):
                    if new_id[c] != child_start[new] + a:
                        raise GameError("internal: children not contiguous")
                    parent[new_id[c]] = new
                    action[new_id[c]] = a
                    depth[new_id[c]] = depth[new] + 1
                    if node.actor == CHANCE:
                        chance_prob[new_id[c]] = raw[c].prob
            elif node.actor != TERMINAL:
                raise GameError(f"non-terminal history {new} has no actions")
            if node.actor == TERMINAL:
                utilities[new] = node.payoffs

        self.actor, self.parent, self.action, self.depth = actor, parent, action, depth
        self.child_start, self.child_count = child_start, child_count
        self.chance_prob, self.utilities = chance_prob, utilities
        self._edge_labels = labels

        # chance distributions must be proper
        for h in np.flatnonzero(actor == CHANCE):
            ps = chance_prob[child_start[h]:child_start[h] + child_count[h]]
            if np.any(ps < 0) or abs(ps.sum() - 1.0) > PROB_DRIFT_ERROR:
                raise GameError(f"chance node {h} has an invalid distribution")

        self._build_infosets(keys)
        self._build_edge_tables()
        term = actor == TERMINAL
        self.terminals = np.flatnonzero(term)
        self.utility_bound = float(np.abs(utilities[term]).max()) if term.any() else 0.0
        self.perfect_recall, self.recall_diagnostics = validate_perfect_recall(self)
        self._finish_infoset_meta()
        return self

    def _build_infosets(self, keys):
        n = self.num_nodes
        groups: dict[tuple[int, Hashable], list[int]] = {}
        for h in range(n):
            p = int(self.actor[h])
            if p >= 0:
                groups.setdefault((p, keys[h]), []).append(h)
        # per player: own depth first, then first-seen (breadth-first) order
        per_player: list[list[tuple[int, Hashable]]] = [[] for _ in range(self.num_players)]
        for gk in groups:
            per_player[gk[0]].append(gk)

        own_depth = self._own_depths()
        infoset = np.full(n, -1, dtype=np.int64)
        metas: list[InfoSetMeta] = []
        self.player_infosets = []
        self.player_slot_range = []
        slot = 0
        for p in range(self.num_players):
            ordered = sorted(per_player[p], key=lambda gk: own_depth[groups[gk][0]])
            ids = []
            start_slot = slot
            for gk in ordered:
                hs = groups[gk]
                acts = tuple(self._edge_labels[c] for c in self.children(hs[0]))
                for h in hs[1:]:
                    other = tuple(self._edge_labels[c] for c in self.children(h))
                    if other != acts:
                        raise GameError(
                            f"histories {hs[0]} and {h} share information set {gk!r} "
                            "but have different actions")
                meta = InfoSetMeta(id=len(metas), player=p, key=gk[1], actions=acts,
                                   histories=tuple(hs), slot_offset=slot)
                infoset[hs] = meta.id
                slot += len(acts)
                ids.append(meta.id)
                metas.append(meta)
            self.player_infosets.append(np.array(ids, dtype=np.int64))
            self.player_slot_range.append((start_slot, slot))
        self.infoset = infoset
        self.infosets = metas
        self.num_slots = slot
        self.num_actions = np.array([m.num_actions for m in metas], dtype=np.int64)
        self.slot_offset = np.array([m.slot_offset for m in metas], dtype=np.int64)
        self.slot_infoset = np.repeat(np.arange(len(metas)), self.num_actions)

    def _own_depths(self) -> np.ndarray:
        """Number of decisions the acting player made before each history."""
        n = self.num_nodes
        counts = np.zeros((n, self.num_players), dtype=np.int64)
        for h in range(1, n):
            counts[h] = counts[self.parent[h]]
            pa = self.actor[self.parent[h]]
            if pa >= 0:
                counts[h, pa] += 1
        out = np.zeros(n, dtype=np.int64)
        mask = self.actor >= 0
        out[mask] = counts[mask, self.actor[mask]]
        self._own_counts = counts
        return out

    def _build_edge_tables(self):
        n = self.num_nodes
        par = self.parent[1:]
        self.edge_slot = np.full(n, -1, dtype=np.int64)
        pin = self.infoset[par]
        dec = pin >= 0
        kids = np.arange(1, n)
        self.edge_slot[kids[dec]] = self.slot_offset[pin[dec]] + self.action[kids[dec]]
        self.edge_owner = np.full(n, TERMINAL, dtype=np.int64)
        self.edge_owner[1:] = self.actor[par]
        # breadth-first levels: nodes of depth d are contiguous
        maxd = int(self.depth.max())
        bounds = np.searchsorted(self.depth, np.arange(maxd + 2))
        self.levels = [(int(bounds[d]), int(bounds[d + 1])) for d in range(maxd + 1)]
        # per level, the reduceat segments grouping children by parent
        self._level_segments = []
        for d in range(1, maxd + 1):
            lo, hi = self.levels[d]
            pars = self.parent[lo:hi]
            starts = np.flatnonzero(np.r_[True, pars[1:] != pars[:-1]])
            self._level_segments.append((lo, hi, starts, pars[starts]))

    def _finish_infoset_meta(self):
        for p in range(self.num_players):
            for iid in self.player_infosets[p]:
                meta = self.infosets[iid]
                children = [set() for _ in meta.actions]
                terms = [set() for _ in meta.actions]
                for h in meta.histories:
                    for a in range(meta.num_actions):
                        stack = [int(self.child_start[h]) + a]
                        while stack:
                            x = stack.pop()
                            if self.actor[x] == TERMINAL:
                                terms[a].add(x)
                            elif self.actor[x] == p:
                                children[a].add(int(self.infoset[x]))
                            else:
                                s, c = self.child_start[x], self.child_count[x]
                                stack.extend(range(s, s + c))
                meta.children_by_action = tuple(tuple(sorted(c)) for c in children)
                meta.terminal_successors = tuple(tuple(sorted(t)) for t in terms)
                for a, cs in enumerate(meta.children_by_action):
                    for c in cs:
                        child = self.infosets[c]
                        if child.parent is not None and child.parent != iid and self.perfect_recall:
                            raise GameError("information-set forest is not a forest")
                        child.parent = iid
                        child.parent_action = a
        for p in range(self.num_players):
            for iid in self.player_infosets[p]:
                meta = self.infosets[iid]
                meta.depth = 0 if meta.parent is None else self.infosets[meta.parent].depth + 1

    # ---------------------------------------------------------------- queries
    def children(self, h: int) -> range:
        s = int(self.child_start[h])
        return range(s, s + int(self.child_count[h]))

    def edge_label(self, h: int) -> str | None:
        return self._edge_labels[h]

    def history_labels(self, h: int) -> tuple[str, ...]:
        path = []
        while h > 0:
            path.append(self._edge_labels[h])
            h = int(self.parent[h])
        return tuple(reversed(path))

    def find_history(self, labels: Iterable[str]) -> int:
        h = 0
        for lab in labels:
            for c in self.children(h):
                if self._edge_labels[c] == lab:
                    h = c
                    break
            else:
                raise GameError(f"no action {lab!r} at history {h}")
        return h

    def infoset_by_key(self, player: int, key: Hashable) -> int:
        for iid in self.player_infosets[player]:
            if self.infosets[iid].key == key:
                return int(iid)
        raise GameError(f"player {player} has no information set {key!r}")

    def is_predecessor(self, h: int, h2: int) -> bool:
        """True iff ``h`` is a (non-strict) prefix of ``h2``."""
        if self.depth[h] > self.depth[h2]:
            return False
        while self.depth[h2] > self.depth[h]:
            h2 = int(self.parent[h2])
        return h == h2

    def infoset_path(self, iid: int) -> list[tuple[int, int]]:
        """``[(I_0, a_0), ..., (I_{d-1}, a_{d-1})]``: the owner's predecessors of
        ``iid`` (root first) with the action each one takes towards ``iid``."""
        path = []
        meta = self.infosets[iid]
        while meta.parent is not None:
            path.append((meta.parent, meta.parent_action))
            meta = self.infosets[meta.parent]
        path.reverse()
        return path

    def max_depth(self, player: int) -> int:
        ids = self.player_infosets[player]
        return max((self.infosets[i].depth for i in ids), default=0)

    def max_actions(self, player: int | None = None) -> int:
        if player is None:
            return int(self.child_count.max())
        ids = self.player_infosets[player]
        return int(self.num_actions[ids].max()) if len(ids) else 0

    def player_slots(self, player: int) -> slice:
        lo, hi = self.player_slot_range[player]
        return slice(lo, hi)

    def __repr__(self) -> str:
        return (f"Game({self.name!r}, players={self.num_players}, histories={self.num_nodes}, "
                f"terminals={len(self.terminals)}, infosets={len(self.infosets)})")

    # ---------------------------------------------------------- text format
    def to_text(self) -> str:
        """Serialize to the line-oriented ``efg-text 1`` format (see :func:`game_from_text`)."""
        out = ["efg-text 1", f"name\t{self.name}", f"players\t{self.num_players}"]
        for h in range(self.num_nodes):
            a = int(self.actor[h])
            actor = "c" if a == CHANCE else "z" if a == TERMINAL else str(a)
            key = "-" if a < 0 else _encode_key(self.infosets[self.infoset[h]].key)
            par = "-" if h == 0 else str(int(self.parent[h]))
            label = "-" if h == 0 else self._edge_labels[h]
            prob = repr(float(self.chance_prob[h])) if h and self.actor[self.parent[h]] == CHANCE else "-"
            pay = ",".join(repr(float(u)) for u in self.utilities[h]) if a == TERMINAL else "-"
            out.append("\t".join(["h", str(h), par, label, actor, key, prob, pay]))
        return "\n".join(out) + "\n"


def _encode_key(key: Hashable) -> str:
    s = repr(key) if not isinstance(key, str) else key
    if "\t" in s or "\n" in s:
        raise GameError("information-set keys may not contain tabs or newlines")
    return s


def game_from_text(text: str) -> Game:
    """Parse the ``efg-text 1`` format.

    One header line ``efg-text 1``, then ``name`` and ``players`` records, then
    one tab-separated record per history::

        h  <id>  <parent|->  <action label|->  <actor: player|c|z>  <infoset key|->
           <chance probability|->  <comma-separated payoffs|->

    Records may appear in any order as long as parents precede children; the
    order of sibling records fixes the action order.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0].split() != ["efg-text", "1"]:
        raise GameError("missing 'efg-text 1' header")
    name, players = "game", None
    recs = []
    for ln in lines[1:]:
        parts = ln.split("\t")
        if parts[0] == "name":
            name = parts[1]
        elif parts[0] == "players":
            players = int(parts[1])
        elif parts[0] == "h":
            if len(parts) != 8:
                raise GameError(f"bad history record: {ln!r}")
            recs.append(parts[1:])
        else:
            raise GameError(f"unknown record type {parts[0]!r}")
    if players is None:
        raise GameError("missing 'players' record")
    b = GameBuilder(players, name)
    ids: dict[str, int] = {}
    for hid, par, label, actor, key, prob, pay in recs:
        act = CHANCE if actor == "c" else TERMINAL if actor == "z" else int(actor)
        k = None if key == "-" else key
        payoffs = None if pay == "-" else [float(x) for x in pay.split(",")]
        if par == "-":
            ids[hid] = b.root(act, k, payoffs)
        else:
            if par not in ids:
                raise GameError(f"history {hid} listed before its parent {par}")
            ids[hid] = b.child(ids[par], label, act, k,
                               None if prob == "-" else float(prob), payoffs)
    return b.build()


# ---------------------------------------------------------------- strategies
class BehavioralStrategy:
    """One player's behavioral strategy: a distribution at each information set.

    ``probs`` is a flat vector over the player's slot range; ``strategy[I]``
    returns a view of the distribution at global information set ``I``.
    """

    def __init__(self, game: Game, player: int, probs: np.ndarray, check: bool = True):
        self.game = game
        self.player = player
        lo, hi = game.player_slot_range[player]
        probs = np.array(probs, dtype=float)
        if probs.shape != (hi - lo,):
            raise GameError(f"expected {hi - lo} probabilities, got shape {probs.shape}")
        self.probs = probs
        if check:
            self._normalize()

    def _normalize(self):
        g = self.game
        lo, _ = g.player_slot_range[self.player]
        ids = g.player_infosets[self.player]
        if not len(ids):
            return
        if np.any(self.probs < -PROB_DRIFT_ERROR):
            raise GameError("negative probability in behavioral strategy")
        np.clip(self.probs, 0.0, None, out=self.probs)
        starts = g.slot_offset[ids] - lo
        sums = np.add.reduceat(self.probs, starts)
        drift = np.abs(sums - 1.0)
        if np.any(drift > PROB_DRIFT_ERROR):
            bad = ids[np.argmax(drift)]
            raise GameError(f"distribution at information set {bad} sums to "
                            f"{sums[np.argmax(drift)]!r}")
        if np.any(drift > PROB_DRIFT_RENORMALIZE):
            self.probs /= np.repeat(sums, g.num_actions[ids])

    @classmethod
    def uniform(cls, game: Game, player: int) -> "BehavioralStrategy":
        ids = game.player_infosets[player]
        probs = np.repeat(1.0 / game.num_actions[ids], game.num_actions[ids])
        return cls(game, player, probs, check=False)

    @classmethod
    def from_dict(cls, game: Game, player: int, table: dict) -> "BehavioralStrategy":
        """Build from ``{infoset id: distribution}``; missing sets are uniform."""
        s = cls.uniform(game, player)
        for iid, dist in table.items():
            s[iid] = dist
        s._normalize()
        return s

    @classmethod
    def pure(cls, game: Game, player: int, choice: Sequence[int]) -> "BehavioralStrategy":
        """Point-mass strategy; ``choice[k]`` is the action at the k-th information
        set of ``game.player_infosets[player]``."""
        lo, hi = game.player_slot_range[player]
        probs = np.zeros(hi - lo)
        ids = game.player_infosets[player]
        probs[game.slot_offset[ids] - lo + np.asarray(choice, dtype=np.int64)] = 1.0
        return cls(game, player, probs, check=False)

    def _local(self, iid: int) -> slice:
        g = self.game
        if g.infosets[iid].player != self.player:
            raise GameError(f"information set {iid} belongs to another player")
        lo = g.slot_offset[iid] - g.player_slot_range[self.player][0]
        return slice(int(lo), int(lo + g.num_actions[iid]))

    def __getitem__(self, iid: int) -> np.ndarray:
        return self.probs[self._local(iid)]

    def __setitem__(self, iid: int, dist) -> None:
        self.probs[self._local(iid)] = dist

    def copy(self) -> "BehavioralStrategy":
        return BehavioralStrategy(self.game, self.player, self.probs.copy(), check=False)

    def __repr__(self) -> str:
        return f"BehavioralStrategy(player={self.player}, slots={len(self.probs)})"


class StrategyProfile:
    """One behavioral strategy per player; the chance policy comes from the game."""

    def __init__(self, game: Game, strategies: Sequence[BehavioralStrategy]):
        if len(strategies) != game.num_players:
            raise GameError("need one strategy per player")
        for p, s in enumerate(strategies):
            if s.player != p or s.game is not game:
                raise GameError(f"strategy {p} does not belong to player {p} of this game")
        self.game = game
        self.strategies = list(strategies)

    @classmethod
    def uniform(cls, game: Game) -> "StrategyProfile":
        return cls(game, [BehavioralStrategy.uniform(game, p) for p in range(game.num_players)])

    def __getitem__(self, player: int) -> BehavioralStrategy:
        return self.strategies[player]

    def replace(self, player: int, strategy: BehavioralStrategy) -> "StrategyProfile":
        s = list(self.strategies)
        s[player] = strategy
        return StrategyProfile(self.game, s)

    def flat(self) -> np.ndarray:
        return np.concatenate([s.probs for s in self.strategies]) if self.strategies else np.zeros(0)


# --------------------------------------------------------------- evaluation
def validate_perfect_recall(game: Game) -> tuple[bool, list[str]]:
    """Check that, for every player, all histories of an information set share the
    same sequence of the player's own (information set, action) pairs."""
    n = game.num_nodes
    seq: list[tuple | None] = [None] * n
    seq[0] = ()
    own: list[dict[int, tuple]] = [dict() for _ in range(n)]
    diags: list[str] = []
    # own[h][p] is player p's (infoset, action) sequence on the way to h
    own[0] = {}
    for h in range(1, n):
        par = int(game.parent[h])
        d = dict(own[par])
        pa = int(game.actor[par])
        if pa >= 0:
            d[pa] = d.get(pa, ()) + ((int(game.infoset[par]), int(game.action[h])),)
        own[h] = d
    seen: dict[int, tuple[int, tuple]] = {}
    for h in range(n):
        p = int(game.actor[h])
        if p < 0:
            continue
        iid = int(game.infoset[h])
        s = own[h].get(p, ())
        if iid not in seen:
            seen[iid] = (h, s)
        elif seen[iid][1] != s:
            h0 = seen[iid][0]
            diags.append(f"player {p}: histories {h0} and {h} share information set "
                         f"{iid} but differ in own history {seen[iid][1]} vs {s}")
    return (not diags), diags


def edge_probabilities(game: Game, flat_strategy: np.ndarray) -> np.ndarray:
    """Probability of the edge into each node under a flat profile vector."""
    probs = game.chance_prob.copy()
    dec = game.edge_slot >= 0
    probs[dec] = flat_strategy[game.edge_slot[dec]]
    return probs


def _as_flat(game: Game, profile) -> np.ndarray:
    if isinstance(profile, StrategyProfile):
        return profile.flat()
    flat = np.asarray(profile, dtype=float)
    if flat.shape != (game.num_slots,):
        raise GameError("profile must be a StrategyProfile or a flat slot vector")
    return flat


def reach_probabilities(game: Game, edge_probs: np.ndarray,
                        players: Iterable[int] | None = None) -> np.ndarray:
    """Reach probability of every history counting only actions of ``players``
    (``CHANCE`` included as a member); ``None`` means everyone."""
    if players is None:
        factor = edge_probs
    else:
        members = np.zeros(game.num_players + 2, dtype=bool)  # index -1: chance, -2: unused
        for p in players:
            members[p] = True
        factor = np.where(members[game.edge_owner], edge_probs, 1.0)
    reach = np.ones(game.num_nodes)
    for lo, hi in game.levels[1:]:
        reach[lo:hi] = reach[game.parent[lo:hi]] * factor[lo:hi]
    return reach


def history_values(game: Game, edge_probs: np.ndarray) -> np.ndarray:
    """Expected utility vector of every history when play continues per the profile."""
    vals = game.utilities.copy()
    for lo, hi, starts, pars in reversed(game._level_segments):
        vals[pars] = np.add.reduceat(vals[lo:hi] * edge_probs[lo:hi, None], starts, axis=0)
    return vals


def reach_prob(game: Game, profile, history: int, players: Iterable[int] | None = None,
               start: int | None = None) -> float:
    """``P(h; pi_S)``, or ``P(start, h; pi_S)`` when ``start`` is given."""
    if not 0 <= history < game.num_nodes or (start is not None and not 0 <= start < game.num_nodes):
        raise GameError(f"unknown history {history if start is None else (start, history)}")
    flat = _as_flat(game, profile)
    pset = None if players is None else set(players)
    origin = 0 if start is None else start
    if not game.is_predecessor(origin, history):
        return 0.0
    p = 1.0
    h = history
    while h != origin:
        par = int(game.parent[h])
        owner = int(game.actor[par])
        if pset is None or owner in pset:
            p *= game.chance_prob[h] if owner == CHANCE else flat[game.edge_slot[h]]
        h = par
    return float(p)


def expected_utility(game: Game, profile) -> np.ndarray:
    """``u(pi)``: expected payoff vector of the profile."""
    ep = edge_probabilities(game, _as_flat(game, profile))
    reach = reach_probabilities(game, ep)
    t = game.terminals
    return reach[t] @ game.utilities[t]


def counterfactual_values(game: Game, profile, player: int,
                          edge_probs: np.ndarray | None = None) -> np.ndarray:
    """Counterfactual action values ``v_I(a; pi)`` for all of ``player``'s slots.

    Returned vector is indexed like the player's local slots
    (``game.player_slots(player)``).
    """
    if edge_probs is None:
        edge_probs = edge_probabilities(game, _as_flat(game, profile))
    others = [CHANCE] + [p for p in range(game.num_players) if p != player]
    reach_o = reach_probabilities(game, edge_probs, others)
    vals = history_values(game, edge_probs)[:, player]
    lo, hi = game.player_slot_range[player]
    kids = np.flatnonzero(game.edge_owner == player)
    w = reach_o[game.parent[kids]] * vals[kids]
    return np.bincount(game.edge_slot[kids] - lo, weights=w, minlength=hi - lo)


def counterfactual_value(game: Game, profile, infoset: int, action) -> float:
    """``v_I(a; pi)`` for an action index, or the expectation under a
    distribution over ``A(I)`` when ``action`` is an array."""
    meta = game.infosets[infoset]
    vals = counterfactual_values(game, profile, meta.player)
    lo = meta.slot_offset - game.player_slot_range[meta.player][0]
    v = vals[lo:lo + meta.num_actions]
    if np.ndim(action) == 0:
        a = int(action)
        if not 0 <= a < meta.num_actions:
            raise GameError(f"action {action} is not legal at information set {infoset}")
        return float(v[a])
    dist = np.asarray(action, dtype=float)
    if dist.shape != v.shape:
        raise GameError("distribution does not match the action set")
    return float(dist @ v)


def immediate_cf_regret(game: Game, profile, infoset: int, transformation) -> float:
    """``E_{a~phi(pi(I))} v_I(a) - E_{a~pi(I)} v_I(a)`` for an action transformation."""
    meta = game.infosets[infoset]
    vals = counterfactual_values(game, profile, meta.player)
    lo = meta.slot_offset - game.player_slot_range[meta.player][0]
    v = vals[lo:lo + meta.num_actions]
    sigma = profile[meta.player][infoset]
    return float(transformation.apply_dist(sigma) @ v - sigma @ v)


def terminal_payoff(game: Game, profile, infoset: int, action: int | None = None,
                    edge_probs: np.ndarray | None = None) -> float:
    """``r(I, a; pi_-i)``: counterfactual value collected from terminal histories
    reached after ``a`` without another decision of the owner.  With ``action``
    None, the expectation under the owner's strategy at ``infoset``."""
    meta = game.infosets[infoset]
    p = meta.player
    if edge_probs is None:
        edge_probs = edge_probabilities(game, _as_flat(game, profile))
    others = [CHANCE] + [q for q in range(game.num_players) if q != p]
    reach_o = reach_probabilities(game, edge_probs, others)
    if action is None:
        sigma = profile[p][infoset]
        return float(sum(sigma[a] * terminal_payoff(game, profile, infoset, a, edge_probs)
                         for a in range(meta.num_actions)))
    zs = list(meta.terminal_successors[action])
    return float(reach_o[zs] @ game.utilities[zs, p])


def counterfactual_value_recursive(game: Game, profile, infoset: int, action) -> float:
    """Counterfactual value via ``v_I(a) = r(I, a) + sum_{I' in I_i(I,a)} v_I'(pi)``."""
    meta = game.infosets[infoset]
    edge_probs = edge_probabilities(game, _as_flat(game, profile))
    strat = profile[meta.player]

    def value(iid: int, a: int) -> float:
        m = game.infosets[iid]
        v = terminal_payoff(game, profile, iid, a, edge_probs)
        for c in m.children_by_action[a]:
            sigma = strat[c]
            v += sum(sigma[b] * value(c, b) for b in range(game.infosets[c].num_actions))
        return v

    if np.ndim(action) == 0:
        return value(infoset, int(action))
    return float(sum(p * value(infoset, a) for a, p in enumerate(action)))


def own_reach(game: Game, strategy: BehavioralStrategy, infoset: int) -> float:
    """``P(h(I); pi_i)``: probability that the owner plays to ``infoset``."""
    p = 1.0
    for iid, a in game.infoset_path(infoset):
        p *= strategy[iid][a]
    return p
