"""Benchmark game generators."""
import os
from dataclasses import dataclass, field

from ..game import Game, GameError, game_from_text
from .goofspiel import build_goofspiel, normalize_order
from .kuhn import build_kuhn
from .leduc import build_leduc
from .sheriff import build_sheriff

KINDS = ("kuhn", "leduc", "goofspiel", "sheriff", "file")

# goofspiel configurations used in the benchmark tables
BENCHMARK_GOOFSPIEL = {(5, "ascending", 2), (5, "descending", 2), (4, "random", 2),
                   (4, "ascending", 3), (4, "descending", 3)}


@dataclass(frozen=True)
class GameSpec:
    kind: str
    ranks: int = 5
    order: str = "ascending"
    players: int = 2
    options: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GameError(f"unknown game kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "goofspiel":
            object.__setattr__(self, "order", normalize_order(self.order))
            if self.ranks < 2:
                raise GameError("goofspiel needs at least two ranks")
            if self.players not in (2, 3):
                raise GameError("goofspiel supports 2 or 3 players")
        if self.kind == "file" and "path" not in dict(self.options):
            raise GameError("a file game needs options=(('path', ...),)")

    @property
    def benchmark_configuration(self) -> bool:
        if self.kind == "goofspiel":
            return (self.ranks, self.order, self.players) in BENCHMARK_GOOFSPIEL
        return self.kind in ("leduc", "sheriff")

    @property
    def label(self) -> str:
        if self.kind == "goofspiel":
            return f"goofspiel({self.ranks},{self.order},{self.players})"
        if self.kind == "file":
            return "file:" + os.path.basename(dict(self.options)["path"])
        return self.kind

    def build(self) -> Game:
        return build_game(self)


_CACHE: dict = {}


def build_game(spec: GameSpec) -> Game:
    """Build (and memoize) the game described by ``spec``."""
    if spec not in _CACHE:
        opts = dict(spec.options)
        if spec.kind == "kuhn":
            g = build_kuhn()
        elif spec.kind == "leduc":
            g = build_leduc(**opts)
        elif spec.kind == "sheriff":
            g = build_sheriff(**opts)
        elif spec.kind == "file":
            with open(opts["path"]) as f:
                g = game_from_text(f.read())
        else:
            g = build_goofspiel(spec.ranks, spec.order, spec.players)
        _CACHE[spec] = g
    return _CACHE[spec]


__all__ = ["GameSpec", "build_game", "build_kuhn", "build_leduc", "build_goofspiel",
           "build_sheriff", "KINDS"]
