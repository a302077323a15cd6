"""Recompute every reference value for the built-in games and the qubit ζ example."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .classical import classical_max, classical_operator_max
from .fur import FurScenario, zeta
from .games import builtin_games
from .nosignal import ns_max
from .quantum import (
    OptimizerConfig,
    chsh_optimal_state,
    ghz_state,
    operator_expectation,
    optimize_game,
    published_angle_sets,
    w_state,
)

TSIRELSON_P = 0.5 + 1.0 / (2.0 * math.sqrt(2.0))


@dataclass(frozen=True)
class Row:
    game: str
    theory: str
    state: str
    quantity: str
    computed: float
    reference: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.computed - self.reference) <= self.tolerance

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def _probability(operator_value: float, n_setting_tuples: int) -> float:
    return 0.5 * (1.0 + operator_value / n_setting_tuples)


def reproduction_rows(seed: int = 42, restarts: int = 100) -> list[Row]:
    config = OptimizerConfig(restarts=restarts, seed=seed)
    games = builtin_games()
    rows: list[Row] = []

    def add(*args):
        rows.append(Row(*args))

    chsh = games["chsh"]
    add("chsh", "classical", "-", "P", classical_max(chsh)[0], 0.75, 0.0)
    q = optimize_game(chsh, chsh_optimal_state(), config)
    add("chsh", "quantum", "bell", "P", _probability(q.best_value, 4), TSIRELSON_P, 1e-4)
    add("chsh", "no-signaling", "-", "P", ns_max(chsh)[0], 1.0, 1e-9)

    sv = games["svetlichny"]
    add("svetlichny", "classical", "-", "P", classical_max(sv)[0], 0.75, 0.0)
    q = optimize_game(sv, ghz_state(), config)
    add("svetlichny", "quantum", "ghz", "<S>", q.best_value, 4 * math.sqrt(2), 1e-3)
    add("svetlichny", "quantum", "ghz", "P", _probability(q.best_value, 8), TSIRELSON_P, 1e-4)
    q = optimize_game(sv, w_state(), config)
    add("svetlichny", "quantum", "w", "<S>", q.best_value, 4.354, 5e-3)
    add("svetlichny", "no-signaling", "-", "P", ns_max(sv)[0], 1.0, 1e-9)

    for name, classical_ref, p_ref in (("mermin_a", 4.0, 0.75), ("mermin_b", 6.0, 0.875)):
        spec = games[name]
        add(name, "classical", "-", "<S>", classical_operator_max(spec), classical_ref, 0.0)
        add(name, "classical", "-", "P", classical_max(spec)[0], p_ref, 0.0)
        for label, state in (("ghz", ghz_state()), ("w", w_state())):
            q = optimize_game(spec, state, config)
            add(name, "quantum", label, "<S>", q.best_value, classical_ref, 1e-4)
            add(name, "quantum", label, "P", _probability(q.best_value, 8), p_ref, 1e-4)
        add(name, "no-signaling", "-", "P", ns_max(spec)[0], 1.0, 1e-9)

    for name, setup in published_angle_sets().items():
        ref = 4.0 if name == "mermin_a" else 6.0
        add(name, "published-angles", "ghz", "<S>", operator_expectation(games[name], ghz_state(), setup), ref, 1e-2)

    scenario = FurScenario.of([(0.5, 0.0, 0.0, 0), (0.5, math.pi / 2, 0.0, 0)])
    value, state = zeta(scenario)
    # +1 eigenvector of (σx + σz)/√2: (cos π/8, sin π/8)
    target = np.array([math.cos(math.pi / 8), math.sin(math.pi / 8)])
    fidelity = abs(np.vdot(target, state)) ** 2
    add("fur", "quantum", "qubit", "zeta", value, TSIRELSON_P, 1e-9)
    add("fur", "quantum", "qubit", "fidelity", float(fidelity), 1.0, 1e-9)
    return rows
