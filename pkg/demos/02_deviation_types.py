"""What the deviation types look like on small games.

A behavioral deviation assigns an action transformation to every
(information set, memory) pair.  Each type restricts which pairs may hold a
non-identity transformation; that shows up in how many distinct strategy
maps each family contains and in how many time-selection keys the learner
keeps per transformation.

    python3 demos/02_deviation_types.py
"""
# %%
from efr import GameSpec, build_game
from efr.audit import count_audit, weight_audit
from efr.deviations import BudgetExceeded, realizable_memories

kuhn = build_game(GameSpec("kuhn"))
goof3 = build_game(GameSpec("goofspiel", 3, "ascending", 2))

# %% distinct strategy maps per family (identity excluded) next to the dominant term
for name, g in (("kuhn", kuhn), ("goofspiel(3)", goof3)):
    print(name)
    for p, fam, cnt, bound in count_audit(g):
        shown = "beyond budget" if cnt is None else cnt
        print(f"  p{p} {fam:<13} {shown!s:>14}   table {bound:g}")

# %% memories a deviation can be in when it arrives at a set
jpb = kuhn.infoset_by_key(0, "J:pb")
for fam in ("tips", "cfps", "bps", "stbhv"):
    try:
        print(f"{fam:<6}", sorted(realizable_memories(kuhn, 0, fam, jpb), key=str))
    except BudgetExceeded as e:
        print(fam, e)
# '*' marks a step where an external transformation hid the recommendation

# %% time-selection keys per transformation: measured maximum vs the table
for p, tok, got, want in weight_audit(goof3):
    flag = "" if got == want else "   (forced last bid: no transformations there)"
    print(f"p{p} {tok:<10} {got:>3} {want:>3}{flag}")
