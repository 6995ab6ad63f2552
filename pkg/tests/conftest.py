import numpy as np
import pytest

from efr.games import GameSpec, build_game

CRITERIA: dict[int, tuple[bool, str]] = {}


def record(number: int, passed: bool, detail: str = ""):
    CRITERIA[number] = (bool(passed), detail)
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def kuhn():
    return build_game(GameSpec("kuhn"))


@pytest.fixture(scope="session")
def goof3():
    return build_game(GameSpec("goofspiel", 3, "ascending", 2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
