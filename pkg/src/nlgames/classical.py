"""Classical (local hidden variable) values by exhaustive enumeration.

Local deterministic strategies are the vertices of the local polytope, and the
winning probability is linear in the behavior, so the maximum over
deterministic strategies is the classical value: shared randomness only mixes
them and cannot do better.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import ENUM_BUDGET
from .errors import BudgetExceededError
from .games import Behavior, Game, XorGameSpec, as_game, digit_table, tuple_index


@dataclass(frozen=True)
class DeterministicStrategy:
    """``table[k][x]`` is party ``k``'s outcome on setting ``x``."""

    table: tuple[tuple[int, ...], ...]
    index: int

    @property
    def n_parties(self) -> int:
        return len(self.table)

    def behavior(self, n_outcomes: int = 2) -> Behavior:
        n = self.n_parties
        m = len(self.table[0])
        tab = np.zeros((n_outcomes**n, m**n))
        for x, sett in enumerate(digit_table(n, m)):
            outs = [self.table[k][sett[k]] for k in range(n)]
            tab[tuple_index(outs, n_outcomes), x] = 1.0
        return Behavior(n, m, n_outcomes, tab)


def _strategy_from_index(index: int, n: int, m: int, d: int) -> DeterministicStrategy:
    per_party = d**m
    funcs = []
    rest = index
    for _ in range(n):
        rest, fi = divmod(rest, per_party)
        funcs.append(tuple(int(v) for v in digit_table(m, d)[fi]))
    return DeterministicStrategy(tuple(funcs), index)


def classical_max(target: Game | XorGameSpec) -> tuple[float, DeterministicStrategy]:
    """Best winning probability over local deterministic strategies.

    Strategy ``index`` packs one local function per party (party 0 least
    significant); each local function is itself an index over setting->outcome
    tables. Ties go to the lowest index.
    """
    game = as_game(target)
    n, m, d = game.shape
    per_party = d**m
    total = per_party**n
    if total > ENUM_BUDGET:
        raise BudgetExceededError(f"{total} deterministic strategies exceed budget {ENUM_BUDGET}")

    funcs = digit_table(m, d)  # (per_party, m): outcome of local function on each setting
    settings = digit_table(n, m)  # (m**n, n)
    strategies = digit_table(n, per_party)  # (total, n): local function index per party

    # outcome index for every (strategy, setting tuple)
    out_idx = np.zeros((total, m**n), dtype=np.int64)
    for k in range(n):
        local = funcs[strategies[:, k]][:, settings[:, k]]
        out_idx += local * d**k
    cols = np.broadcast_to(np.arange(m**n), out_idx.shape)
    wins = game.predicate[out_idx, cols].astype(np.float64) @ game.distribution
    best = int(np.argmax(wins))
    return float(wins[best]), _strategy_from_index(best, n, m, d)


def classical_operator_max(coeffs, n_parties: int | None = None, n_settings: int = 2) -> float:
    """Exact max of ``sum_x c(x) * prod_k a_k(x_k)`` over assignments ``a_k(x) in {-1, +1}``.

    ``coeffs`` is indexed by setting index, or may be an :class:`XorGameSpec`.
    """
    if isinstance(coeffs, XorGameSpec):
        n_parties, n_settings = coeffs.n_parties, coeffs.n_settings
        coeffs = 1 - 2 * coeffs.f.astype(np.int64)
    coeffs = np.asarray(coeffs)
    if n_parties is None:
        n_parties = int(round(np.log(coeffs.size) / np.log(n_settings)))
    if coeffs.size != n_settings**n_parties:
        raise ValueError(f"{coeffs.size} coefficients do not fit {n_parties} parties x {n_settings} settings")
    if 2 ** (n_parties * n_settings) > ENUM_BUDGET:
        raise BudgetExceededError("too many sign assignments to enumerate")
    settings = digit_table(n_parties, n_settings)
    signs = 1 - 2 * digit_table(n_parties * n_settings, 2).reshape(-1, n_parties, n_settings)
    terms = np.prod(signs[:, np.arange(n_parties), settings], axis=2)  # (assignments, setting tuples)
    return float(np.max(terms @ coeffs))
