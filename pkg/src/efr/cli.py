"""Command line: ``run``, ``audit`` and ``counterexample``.

Every flag may also come from a flat ``key = value`` config file given with
``--config``; keys are flag names without the leading dashes (``-`` and ``_``
are interchangeable).  Flags given on the command line win.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .deviations import EXIN_TOKENS, TABLE1_TOKENS, TOKENS
from .game import GameError
from .games import KINDS, GameSpec, build_game
from .games.leduc import MBB_PER_CHIP
from .regret_matching import VARIANTS, RegretMatcher, regret_bound, rmpp_adversary

EXIT_OK, EXIT_ERROR, EXIT_AUDIT_FAILED = 0, 1, 2


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _tokens(text) -> tuple:
    out = tuple(t.strip() for t in str(text).split(",") if t.strip())
    for t in out:
        if t not in TOKENS:
            raise argparse.ArgumentTypeError(f"unknown deviation type {t!r}; expected one of {TOKENS}")
    return out


def _ints(text) -> tuple:
    return tuple(int(t) for t in str(text).split(",") if t.strip())


# (flag, type, default, help) per subcommand
GAME_OPTS = [
    ("game", str, "goofspiel", f"game kind: {', '.join(KINDS)}"),
    ("ranks", int, 5, "goofspiel ranks"),
    ("order", str, "ascending", "goofspiel point order: asc, desc or random"),
    ("players", int, 2, "goofspiel players (2 or 3)"),
    ("game_file", str, None, "efg-text file, used when --game file"),
]
OPTIONS = {
    "run": GAME_OPTS + [
        ("devtype", _tokens, TABLE1_TOKENS, "comma-separated deviation types to evaluate"),
        ("opponents", _tokens, None, "comma-separated opponent types (default: same as --devtype)"),
        ("exin", _bool, False, "add the EX+IN variants to the roster"),
        ("rounds", int, 1000, "rounds T"),
        ("regime", str, "fixed", "fixed or simultaneous"),
        ("rm", str, "rm", f"regret-matching variant: {', '.join(VARIANTS)}"),
        ("out", str, "out", "output directory"),
        ("workers", int, 1, "worker processes for independent pairings"),
        ("seats", _ints, None, "comma-separated seats to evaluate (default: all)"),
        ("timing", str, "sidecar", "elapsed_ns: sidecar (timings.csv), inline or off"),
        ("plots", _bool, True, "write learning-curve images"),
    ],
    "audit": GAME_OPTS + [
        ("rounds", int, 1000, "self-play rounds for the regret-bound checks"),
        ("seed", int, 0, "seed for random deviations and profiles"),
        ("devtype", _tokens, None, "types to audit (default: all nine)"),
    ],
    "counterexample": [
        ("learner", str, "rm_pp", "rm, rm_plus or rm_pp"),
        ("rounds", int, 10000, "rounds T"),
        ("out", str, None, "optional CSV of the per-round trace"),
    ],
}


def read_config(path: str) -> dict:
    """Flat ``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    out = {}
    with open(path) as f:
        for num, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            sep = "=" if "=" in line else ":" if ":" in line else None
            if sep is None:
                raise GameError(f"{path}:{num}: expected key = value")
            k, v = line.split(sep, 1)
            out[k.strip().lower().replace("-", "_")] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="efr", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value file; flags win on conflict")
        for flag, typ, default, help_ in opts:
            # SUPPRESS: absent flags stay absent so config values can fill them
            p.add_argument("--" + flag.replace("_", "-"), dest=flag, type=typ,
                           default=argparse.SUPPRESS, help=f"{help_} (default: {default})")
    return ap


def resolve(command: str, given: dict, config: dict | None = None) -> dict:
    """Merge defaults < config file < flags."""
    opts = {flag: (typ, default) for flag, typ, default, _ in OPTIONS[command]}
    config = config or {}
    unknown = set(config) - set(opts)
    if unknown:
        raise GameError(f"unknown config keys for {command}: {sorted(unknown)}")
    out = {}
    for flag, (typ, default) in opts.items():
        if flag in given:
            out[flag] = given[flag]
        elif flag in config:
            try:
                out[flag] = typ(config[flag])
            except (ValueError, argparse.ArgumentTypeError) as e:
                raise GameError(f"config key {flag}: {e}") from None
        else:
            out[flag] = default
    return out


def game_spec(opts: dict) -> GameSpec:
    kind = opts["game"]
    if kind == "file":
        if not opts.get("game_file"):
            raise GameError("--game file needs --game-file")
        return GameSpec("file", options=(("path", opts["game_file"]),))
    if kind == "goofspiel":
        return GameSpec(kind, opts["ranks"], opts["order"], opts["players"])
    return GameSpec(kind)


def cmd_run(opts: dict) -> int:
    from .harness import ExperimentConfig, emit_outputs, run_experiment, summarize

    variants = tuple(opts["devtype"])
    opponents = tuple(opts["opponents"]) if opts["opponents"] else None
    if opts["exin"]:
        variants += tuple(t for t in EXIN_TOKENS if t not in variants)
        if opponents:
            opponents += tuple(t for t in EXIN_TOKENS if t not in opponents)
    cfg = ExperimentConfig(game_spec(opts), variants=variants, opponents=opponents,
                           rounds=opts["rounds"], regime=opts["regime"], rm=opts["rm"],
                           out=opts["out"], workers=opts["workers"], seats=opts["seats"],
                           plots=opts["plots"], timing=opts["timing"])
    rows = run_experiment(cfg)
    paths = emit_outputs(rows, cfg)
    print(f"{cfg.game.label}  regime={cfg.regime}  rounds={cfg.rounds}  rm={cfg.rm}")
    chips = cfg.game.kind == "leduc" and dict(cfg.game.options).get("units", "mbb") == "mbb"
    for v, m in summarize(rows).items():
        # Leduc payoffs are in milli-big-blinds; show chips alongside
        extra = f"   ({m / MBB_PER_CHIP:+.4f} chips)" if chips else ""
        print(f"  {v:<10} {m:+.4f}{extra}")
    for k, p in paths.items():
        print(f"  {k}: {p}")
    return EXIT_OK


def cmd_audit(opts: dict) -> int:
    from .audit import AUDIT_TOKENS, format_checks, run_audit

    game = build_game(game_spec(opts))
    tokens = opts["devtype"] or AUDIT_TOKENS
    checks = run_audit(game, rounds=opts["rounds"], seed=opts["seed"], tokens=tokens)
    print(format_checks(checks))
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed} passed, {failed} failed")
    return EXIT_AUDIT_FAILED if failed else EXIT_OK


def cmd_counterexample(opts: dict) -> int:
    T = opts["rounds"]
    learner = opts["learner"]
    if learner not in ("rm", "rm_plus", "rm_pp"):
        raise GameError(f"counterexample learner must be rm, rm_plus or rm_pp, not {learner!r}")
    res = rmpp_adversary(T, RegretMatcher(2, learner))
    t = np.arange(1, T + 1)
    bound = regret_bound(1.0, 2, 1, t)
    q_ok = bool(np.all(res["Q"] >= t / 4))
    r_ok = bool(np.all(res["regret"] <= bound))
    print(f"learner={learner} T={T}")
    print(f"  Q^T = {res['Q_T']:.6g}   T/4 = {T / 4:.6g}   Q^t >= t/4 for all t: {q_ok}")
    print(f"  max cumulative regret = {res['regret'][-1]:.6g}   2U sqrt(|A| T) = {bound[-1]:.6g}"
          f"   within bound for all t: {r_ok}")
    if opts["out"]:
        import csv
        with open(opts["out"], "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(("round", "p0", "p1", "reward0", "reward1", "Q", "regret"))
            for k in range(T):
                w.writerow((k + 1, *map(repr, res["policies"][k]), *map(repr, res["rewards"][k]),
                            repr(res["Q"][k]), repr(res["regret"][k])))
    return EXIT_OK


COMMANDS = {"run": cmd_run, "audit": cmd_audit, "counterexample": cmd_counterexample}


def main(argv=None) -> int:
    ap = build_parser()
    ns = vars(ap.parse_args(argv))
    command = ns.pop("command")
    path = ns.pop("config", None)
    try:
        opts = resolve(command, ns, read_config(path) if path else None)
        return COMMANDS[command](opts)
    except (GameError, OSError) as e:
        print(f"efr {command}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
