import functools

import numpy as np
import pytest

from nlgames import qcore
from nlgames.games import builtin_games
from nlgames.quantum import OptimizerConfig, named_state, optimize_game


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def specs():
    return builtin_games()


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_ket(rng, n):
    return qcore.ket(rng.normal(size=n) + 1j * rng.normal(size=n))


def random_behavior_table(rng, n_parties, n_settings=2, n_outcomes=2):
    t = rng.random((n_outcomes**n_parties, n_settings**n_parties))
    return t / t.sum(axis=0)


@functools.cache
def optimized(game_name, state_name, restarts=100, seed=42):
    """Shared optimizer runs; the expensive ones are reused across test modules."""
    spec = builtin_games()[game_name]
    state = named_state(state_name, spec.n_parties)
    return optimize_game(spec, state, OptimizerConfig(restarts=restarts, seed=seed))


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number, passed, detail):
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
