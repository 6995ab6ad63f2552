"""Regret matching++ against an adversary that pays the unlikely action.

RM++ accumulates the positive part of each round's regret.  Against an
adversary that always rewards whichever of two actions the learner plays
with probability below one half, that sum grows like T / 4, while the true
cumulative regret of plain regret matching stays of order sqrt(T).

    python3 demos/03_rm_pp_counterexample.py
"""
# %%
import numpy as np

from efr.regret_matching import RegretMatcher, rmpp_adversary

T = 10_000
pp = rmpp_adversary(T, RegretMatcher(2, "rm_pp"))
rm = rmpp_adversary(T, RegretMatcher(2, "rm"))
t = np.arange(1, T + 1)

# %%
print("RM++ positive-part sum at T:", round(pp["Q_T"], 3), " T/4 =", T / 4)
print("holds for every t <= T:", bool(np.all(pp["Q"] >= t / 4)))
print("RM true regret at T:", round(rm["regret"][-1], 3),
      " 2 sqrt(2T) =", round(2 * np.sqrt(2 * T), 3))

# %% the policy barely moves: the adversary keeps it near one half
print("last RM++ policies:", np.round(pp["policies"][-4:], 4).tolist())
