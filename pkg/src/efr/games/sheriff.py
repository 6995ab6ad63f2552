"""Sheriff: a two-player bribery negotiation game."""
from ..game import TERMINAL, Game, GameBuilder

SMUGGLER, SHERIFF = 0, 1


def sheriff_payoff(items: int, bribe: int, inspect: bool) -> tuple[float, float]:
    if not inspect:
        return (float(items - bribe), float(bribe))
    if items > 0:
        return (-2.0 * items, 2.0 * items)
    return (3.0, -3.0)


def build_sheriff(max_items: int = 3, max_bribe: int = 3, rounds: int = 4) -> Game:
    """The smuggler privately loads 0..max_items items, then ``rounds`` rounds of
    (bribe offer, inspect/pass signal) follow; only the last round binds."""
    b = GameBuilder(2, "sheriff")
    root = b.root(SMUGGLER, key=("load",))

    def expand(h, items, public, r):
        for bribe in range(max_bribe + 1):
            k = b.child(h, f"b{bribe}", SHERIFF, key=("sheriff", public + (bribe,)))
            for sig in ("pass", "inspect"):
                pub = public + (bribe, sig)
                if r == rounds - 1:
                    b.child(k, sig, TERMINAL, payoffs=sheriff_payoff(items, bribe, sig == "inspect"))
                else:
                    n = b.child(k, sig, SMUGGLER, key=("smuggler", items, pub))
                    expand(n, items, pub, r + 1)

    for items in range(max_items + 1):
        h = b.child(root, f"load{items}", SMUGGLER, key=("smuggler", items, ()))
        expand(h, items, (), 0)
    return b.build()
