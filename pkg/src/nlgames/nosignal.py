"""No-signaling polytope: constraints, membership and LP maximization.

A behavior is no-signaling when, for every proper subset of parties, the
marginal distribution of their outcomes does not depend on the settings of
the remaining parties.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .constants import LP_FEAS_TOL, LP_VAR_BUDGET, SNAP_TOL
from .errors import BudgetExceededError, InfeasibleError, InvariantViolation
from .games import Behavior, Game, XorGameSpec, as_game, digit_table, tuple_index, winning_probability
from .simplex import LinearProgram, LPSolution, solve_lp


@dataclass(frozen=True, eq=False)
class ConstraintSet:
    """Equality rows over the flattened behavior ``table[o, x] -> o * n_setting_tuples + x``."""

    matrix: np.ndarray
    rhs: np.ndarray
    n_normalization: int


def ns_constraints(n_parties: int, n_settings: int = 2, n_outcomes: int = 2) -> ConstraintSet:
    """Normalization rows plus the no-signaling equalities.

    Only marginals of the ``n-1``-party subsets are constrained, against
    consecutive settings of the excluded party; constraints for smaller
    subsets follow from these by further marginalization.
    """
    n, m, d = n_parties, n_settings, n_outcomes
    n_out, n_set = d**n, m**n
    n_vars = n_out * n_set
    if n_vars > LP_VAR_BUDGET:
        raise BudgetExceededError(f"{n_vars} behavior entries exceed budget {LP_VAR_BUDGET}")

    def var(o_digits, x_digits):
        return tuple_index(o_digits, d) * n_set + tuple_index(x_digits, m)

    rows = []
    for x in range(n_set):
        row = np.zeros(n_vars)
        row[np.arange(n_out) * n_set + x] = 1.0
        rows.append(row)
    n_norm = len(rows)

    if n > 1:
        sub_outs = digit_table(n - 1, d)
        sub_sets = digit_table(n - 1, m)
        for k in range(n):
            for o_sub in sub_outs:
                for x_sub in sub_sets:
                    for j in range(m - 1):
                        row = np.zeros(n_vars)
                        for ok in range(d):
                            o = list(o_sub[:k]) + [ok] + list(o_sub[k:])
                            row[var(o, list(x_sub[:k]) + [j] + list(x_sub[k:]))] += 1.0
                            row[var(o, list(x_sub[:k]) + [j + 1] + list(x_sub[k:]))] -= 1.0
                        rows.append(row)

    mat = np.array(rows)
    rhs = np.concatenate([np.ones(n_norm), np.zeros(len(rows) - n_norm)])
    return ConstraintSet(mat, rhs, n_norm)


def behavior_tensor(behavior: Behavior) -> np.ndarray:
    """Table as an array indexed ``[o_0, ..., o_{n-1}, x_0, ..., x_{n-1}]``."""
    n, m, d = behavior.shape
    arr = behavior.table.reshape((d,) * n + (m,) * n)
    # C-order reshape puts the most significant digit (last party) first
    perm = list(reversed(range(n))) + [n + i for i in reversed(range(n))]
    return arr.transpose(perm)


def signaling_residual(behavior: Behavior) -> float:
    """Largest change of any proper-subset marginal under a remote setting change."""
    n, m, d = behavior.shape
    p = behavior_tensor(behavior)
    worst = 0.0
    for size in range(1, n):
        for subset in combinations(range(n), size):
            others = [k for k in range(n) if k not in subset]
            marg = p.sum(axis=tuple(others))  # axes: kept outcomes, then all n settings
            for k in others:
                axis = size + k
                ref = np.take(marg, [0], axis=axis)
                worst = max(worst, float(np.max(np.abs(marg - ref))))
    return worst


def is_no_signaling(behavior: Behavior, tol: float = 1e-10) -> bool:
    if np.min(behavior.table) < -tol:
        return False
    if np.max(np.abs(behavior.table.sum(axis=0) - 1.0)) > tol:
        return False
    return signaling_residual(behavior) <= tol


def ns_linear_program(target: Game | XorGameSpec) -> LinearProgram:
    """LP maximizing the winning probability over the no-signaling polytope.

    Entries are bounded above by 1 through the normalization rows, so no
    explicit upper bounds are added.
    """
    game = as_game(target)
    cons = ns_constraints(*game.shape)
    objective = (game.predicate * game.distribution[None, :]).astype(np.float64).reshape(-1)
    return LinearProgram(objective, cons.matrix, cons.rhs)


def ns_solve(target: Game | XorGameSpec) -> tuple[float, Behavior, LPSolution]:
    game = as_game(target)
    sol = solve_lp(ns_linear_program(game))
    if sol.primal_residual > LP_FEAS_TOL:
        raise InfeasibleError(f"LP solution violates constraints by {sol.primal_residual:.3e}")
    table = sol.x.copy()
    table[np.abs(table) < SNAP_TOL] = 0.0
    n, m, d = game.shape
    behavior = Behavior(n, m, d, table.reshape(d**n, m**n))
    if not is_no_signaling(behavior, tol=LP_FEAS_TOL):
        raise InvariantViolation("LP optimum is not a no-signaling behavior")
    return winning_probability(game, behavior), behavior, sol


def ns_max(target: Game | XorGameSpec) -> tuple[float, Behavior]:
    """Maximum winning probability over all no-signaling behaviors, with an optimal behavior."""
    value, behavior, _ = ns_solve(target)
    return value, behavior
