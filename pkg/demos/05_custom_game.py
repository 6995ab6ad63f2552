"""Bring your own game.

Trees are built node by node with GameBuilder (or read from the efg-text
format with game_from_text, which is also what `efr run --game file` uses).
This one is a tiny signalling game: chance picks a type, the sender sees it
and sends a message, the receiver sees only the message and guesses.  Both
gain when the guess is right; message "y" costs the low type a little, which
is enough to break the tie between the two possible codes.
"""
# %%
import numpy as np

from efr.audit import EmpiricalPlay, osr_gap, audit_maps
from efr.game import CHANCE, TERMINAL, GameBuilder, expected_utility, game_from_text
from efr.learner import self_play

b = GameBuilder(2, "signal")
root = b.root(CHANCE)
for typ, prior in (("lo", 0.6), ("hi", 0.4)):
    s = b.child(root, typ, 0, f"type={typ}", prob=prior)
    for msg in ("x", "y"):
        r = b.child(s, msg, 1, f"msg={msg}")
        for guess in ("lo", "hi"):
            right = float(guess == typ)
            cost = 0.2 if (typ, msg) == ("lo", "y") else 0.0
            b.child(r, guess, TERMINAL, payoffs=(right - cost, right))
game = b.build()
print(game, "perfect recall:", game.perfect_recall)

# %% the text format round-trips
text = game.to_text()
assert game_from_text(text).to_text() == text
print(text.splitlines()[0], "...", len(text.splitlines()), "lines")

# %% general-sum self-play with behavioral deviations
learners, profiles = self_play(game, "bhv", 500)
print("payoffs of the last profile:", np.round(expected_utility(game, profiles[-1]), 3))
play = EmpiricalPlay(game, profiles)
for p in range(2):
    print(f"p{p} OSR gap against behavioral deviations:",
          round(osr_gap(play, p, audit_maps(game, p, "bhv")), 5))
for p, l in enumerate(learners):
    for iid in game.player_infosets[p]:
        m = game.infosets[int(iid)]
        print(f"  p{p} {m.key:<8}", np.round(l.strategy()[int(iid)], 3))
