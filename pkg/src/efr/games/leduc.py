"""Leduc hold'em.

Suits never matter for the outcome, so chance deals ranks with the matching
probabilities (a pair of equal ranks is rarer than two distinct ranks).
"""
from ..game import CHANCE, TERMINAL, Game, GameBuilder

RANKS = "JQK"
MBB_PER_CHIP = 1000.0


def hand_strength(private: int, public: int) -> tuple[int, int]:
    return (1, private) if private == public else (0, private)


def build_leduc(units: str = "mbb", ante: int = 1, bets=(2, 4), max_raises: int = 2) -> Game:
    """Two-round limit Leduc; ``units`` is ``"mbb"`` (default) or ``"chips"``."""
    scale = MBB_PER_CHIP if units == "mbb" else 1.0
    b = GameBuilder(2, "leduc")
    root = b.root(CHANCE)

    def settle(contrib, folder, cards, public):
        if folder is not None:
            w = 1 - folder
        else:
            s0, s1 = hand_strength(cards[0], public), hand_strength(cards[1], public)
            if s0 == s1:
                return (0.0, 0.0)
            w = 0 if s0 > s1 else 1
        won = contrib[1 - w] * scale
        return (won, -won) if w == 0 else (-won, won)

    def betting(h, rnd, seq, contrib, raises, cards, public, history):
        """``h`` is a decision node of the player to act; ``seq`` this round's actions."""
        p = len(seq) % 2
        owe = contrib[1 - p] - contrib[p]
        acts = []
        if owe > 0:
            acts.append("f")
        acts.append("c")
        if raises < max_raises:
            acts.append("r")
        for a in acts:
            c = list(contrib)
            nraises = raises
            if a == "c":
                c[p] += owe
            elif a == "r":
                c[p] += owe + bets[rnd]
                nraises += 1
            c = tuple(c)
            s = seq + a
            hist = history + a
            if a == "f":
                b.child(h, a, TERMINAL, payoffs=settle(c, p, cards, public))
            elif a == "c" and (owe > 0 or len(s) == 2):
                if rnd == 1:
                    b.child(h, a, TERMINAL, payoffs=settle(c, None, cards, public))
                else:
                    deal_public(h, a, c, cards, hist + "/")
            else:
                q = 1 - p
                k = b.child(h, a, q, key=(RANKS[cards[q]], public_key(public), hist))
                betting(k, rnd, s, c, nraises, cards, public, hist)

    def public_key(public):
        return None if public is None else RANKS[public]

    def deal_public(h, label, contrib, cards, history):
        c = b.child(h, label, CHANCE)
        left = [2, 2, 2]
        for x in cards:
            left[x] -= 1
        for r in range(3):
            if left[r]:
                k = b.child(c, RANKS[r], 0, key=(RANKS[cards[0]], RANKS[r], history), prob=left[r] / 4)
                betting(k, 1, "", contrib, 0, cards, r, history)

    for c0 in range(3):
        for c1 in range(3):
            p = (1 / 3) * ((1 / 5) if c0 == c1 else (2 / 5))
            k = b.child(root, RANKS[c0] + RANKS[c1], 0, key=(RANKS[c0], None, ""), prob=p)
            betting(k, 0, "", (ante, ante), 0, (c0, c1), None, "")
    return b.build()
