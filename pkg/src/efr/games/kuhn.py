"""Three-card Kuhn poker."""
from ..game import CHANCE, TERMINAL, Game, GameBuilder

CARDS = "JQK"
# betting sequence -> (next player or None, pot multiplier at showdown / fold winner)
_NEXT = {"": 0, "p": 1, "b": 1, "pb": 0}


def _payoff(seq: str, c0: int, c1: int) -> tuple[float, float]:
    if seq == "bp":
        return (1.0, -1.0)
    if seq == "pbp":
        return (-1.0, 1.0)
    stake = 1.0 if seq == "pp" else 2.0
    return (stake, -stake) if c0 > c1 else (-stake, stake)


def build_kuhn() -> Game:
    b = GameBuilder(2, "kuhn")
    root = b.root(CHANCE)
    deals = [(i, j) for i in range(3) for j in range(3) if i != j]

    def expand(h, seq, c0, c1):
        for a in "pb":
            s = seq + a
            if s in _NEXT:
                p = _NEXT[s]
                card = c0 if p == 0 else c1
                k = b.child(h, a, p, key=CARDS[card] + ":" + s)
                expand(k, s, c0, c1)
            else:
                b.child(h, a, TERMINAL, payoffs=_payoff(s, c0, c1))

    for c0, c1 in deals:
        h = b.child(root, CARDS[c0] + CARDS[c1], 0, key=CARDS[c0] + ":", prob=1 / 6)
        expand(h, "", c0, c1)
    return b.build()
