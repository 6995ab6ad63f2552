"""A desk-sized tournament on goofspiel.

Each evaluated type plays every roster type from both seats.  In the fixed
regime the opponent replays a sequence frozen from its own self-play, so the
evaluated learner faces the same opponent whichever type it is.  The full
five-rank version is what `efr run` does by default; four ranks keeps this
demo to a minute or two.

    python3 demos/04_goofspiel_tournament.py [out_dir]
"""
# %%
import sys

from efr import GameSpec
from efr.harness import ExperimentConfig, emit_outputs, run_experiment, summarize, summary_table

out = sys.argv[1] if len(sys.argv) > 1 else "demo_tournament"
cfg = ExperimentConfig(GameSpec("goofspiel", 4, "ascending", 2),
                       variants=("act_in", "cf", "tips", "bhv"), rounds=200, out=out)
rows = run_experiment(cfg)
paths = emit_outputs(rows, cfg)

# %% mean payoff per evaluated type (1 is a sure win, 0.5 an even split)
for v, m in summarize(rows).items():
    print(f"{v:>7}  {m:.4f}")

# %% against each opponent
tab = summary_table(rows)
roster = cfg.roster
print("        " + "".join(f"{o:>8}" for o in roster))
for v in cfg.variants:
    print(f"{v:>7} " + "".join(f"{tab[v, o]:8.3f}" for o in roster))
print("written:", ", ".join(paths.values()))
