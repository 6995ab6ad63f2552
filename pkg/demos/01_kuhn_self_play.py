"""Self-play on Kuhn poker with several deviation types.

Blind counterfactual deviations make EFR coincide with CFR, so that run is the
familiar baseline.  Richer types cost more per round but push the average
strategy towards a sharper form of rationality; here we just watch how fast
each average profile loses exploitability.

    python3 demos/01_kuhn_self_play.py
"""
# %%
from efr import GameSpec, build_game
from efr.audit import EmpiricalPlay, exploitability
from efr.learner import self_play

kuhn = build_game(GameSpec("kuhn"))
print(kuhn)

# %% exploitability of the average profile after T rounds
checkpoints = (10, 100, 1000)
for token in ("cf", "cfps", "tips", "bhv"):
    _, profiles = self_play(kuhn, token, checkpoints[-1])
    row = []
    for T in checkpoints:
        avg = EmpiricalPlay(kuhn, profiles[:T]).average_strategies()
        row.append(exploitability(kuhn, avg))
    print(f"{token:>5}  " + "  ".join(f"T={T:<5d}{e:.4f}" for T, e in zip(checkpoints, row)))

# %% the average strategy of player 0 after CFR-style play
learners, _ = self_play(kuhn, "cf", 1000)
avg = learners[0].average_strategy()
for iid in kuhn.player_infosets[0]:
    m = kuhn.infosets[int(iid)]
    probs = ", ".join(f"{a}={p:.3f}" for a, p in zip(m.actions, avg[int(iid)]))
    print(f"  {m.key:<6} {probs}")
# the jack bets with probability alpha and the king with 3 * alpha
