"""Imperfect-information goofspiel.

Bids within a round are serialized (player 0 first); a player's information
set records its own bids, the revealed point cards and the winner of each
finished round (``-1`` for a draw), never the opponents' bids.
"""
from ..game import CHANCE, TERMINAL, Game, GameBuilder, GameError

ORDERS = ("ascending", "descending", "random")
_ALIASES = {"asc": "ascending", "up": "ascending", "desc": "descending", "down": "descending",
            "rand": "random", "r": "random"}


def normalize_order(order: str) -> str:
    order = _ALIASES.get(order, order)
    if order not in ORDERS:
        raise GameError(f"unknown point-card order {order!r}")
    return order


def round_winner(bids) -> int:
    """Index of the strictly highest bid, or -1 when the top bid is shared."""
    top = max(bids)
    holders = [p for p, x in enumerate(bids) if x == top]
    return holders[0] if len(holders) == 1 else -1


def win_shares(points) -> tuple[float, ...]:
    """1 for a sole point leader, 1/k for each of k tied leaders."""
    best = max(points)
    leaders = [p for p, x in enumerate(points) if x == best]
    return tuple(1.0 / len(leaders) if p in leaders else 0.0 for p in range(len(points)))


def build_goofspiel(n_ranks: int = 5, order: str = "ascending", n_players: int = 2) -> Game:
    order = normalize_order(order)
    if n_ranks < 2:
        raise GameError("goofspiel needs at least two ranks")
    if n_players not in (2, 3):
        raise GameError("goofspiel supports 2 or 3 players")
    b = GameBuilder(n_players, f"goofspiel({n_ranks},{order},{n_players})")
    full = tuple(range(1, n_ranks + 1))

    def play(h_parent, label, prob, hands, view, points, left):
        """Attach the subtree starting at a round boundary under ``h_parent``."""
        if not left:
            b.child(h_parent, label, TERMINAL, prob=prob, payoffs=win_shares(points))
            return
        if order == "random":
            c = b.child(h_parent, label, CHANCE, prob=prob) if h_parent is not None else b.root(CHANCE)
            for point in left:
                rest = tuple(x for x in left if x != point)
                nview = tuple(v + (("point", point),) for v in view)
                decide(c, f"point{point}", 1.0 / len(left), 0, point, hands, (), nview, points, rest)
        else:
            point = left[0]
            decide(h_parent, label, prob, 0, point, hands, (), view, points, left[1:])

    def decide(parent, label, prob, p, point, hands, bids, view, points, left):
        if p == n_players:
            w = round_winner(bids)
            pts = list(points)
            if w >= 0:
                pts[w] += point
            nhands = tuple(tuple(c for c in hands[q] if c != bids[q]) for q in range(n_players))
            nview = tuple(view[q] + ((bids[q], w),) for q in range(n_players))
            play(parent, label, prob, nhands, nview, tuple(pts), left)
            return
        key = (point,) + view[p]
        if parent is None:
            h = b.root(p, key=key)
        else:
            h = b.child(parent, label, p, key=key, prob=prob)
        for bid in hands[p]:
            decide(h, f"bid{bid}", None, p + 1, point, hands, bids + (bid,), view, points, left)

    hands = tuple(full for _ in range(n_players))
    view = tuple(() for _ in range(n_players))
    points = tuple(0 for _ in range(n_players))
    deck = full if order != "descending" else tuple(reversed(full))
    play(None, None, None, hands, view, points, deck)
    return b.build()
