"""Dense two-phase primal simplex with Bland's rule.

Solves ``max c.x  s.t.  A x = b,  0 <= x (<= upper)``. Finite upper bounds are
turned into equalities ``x_i + w_i = u_i`` with fresh slack columns. Redundant
equality rows are detected at the end of phase one and dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import LP_FEAS_TOL, PIVOT_TOL
from .errors import InfeasibleError, NlgamesError


class UnboundedError(NlgamesError):
    pass


@dataclass(frozen=True, eq=False)
class LinearProgram:
    objective: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    upper: np.ndarray | None = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=np.float64).reshape(-1)
        a = np.asarray(self.a_eq, dtype=np.float64)
        b = np.asarray(self.b_eq, dtype=np.float64).reshape(-1)
        if a.ndim != 2 or a.shape != (b.size, c.size):
            raise ValueError(f"constraint matrix {a.shape} does not match rhs {b.size} / objective {c.size}")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "a_eq", a)
        object.__setattr__(self, "b_eq", b)
        if self.upper is not None:
            u = np.broadcast_to(np.asarray(self.upper, dtype=np.float64), c.shape).copy()
            object.__setattr__(self, "upper", u)

    @property
    def n_vars(self) -> int:
        return self.objective.size


@dataclass(frozen=True, eq=False)
class LPSolution:
    x: np.ndarray
    value: float
    duals: np.ndarray  # one per kept row of the standard-form system
    reduced_costs: np.ndarray
    basis: tuple[int, ...]
    iterations: int
    primal_residual: float
    slackness_residual: float


def _pivot(tab: np.ndarray, cost: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    col_vals = tab[:, col].copy()
    col_vals[row] = 0.0
    tab -= np.outer(col_vals, tab[row])
    cost -= cost[col] * tab[row]


def _run(tab, cost, basis, allowed, max_iter) -> int:
    """Bland-rule iterations on ``tab`` (rhs in last column) maximizing with reduced ``cost``."""
    it = 0
    while True:
        candidates = np.nonzero((cost[:-1] > PIVOT_TOL) & allowed)[0]
        if candidates.size == 0:
            return it
        col = int(candidates[0])
        column = tab[:, col]
        rows = np.nonzero(column > PIVOT_TOL)[0]
        if rows.size == 0:
            raise UnboundedError("objective is unbounded")
        ratios = tab[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(tab, cost, row, col)
        basis[row] = col
        it += 1
        if it > max_iter:
            raise NlgamesError("simplex iteration limit reached")


def _standard_form(lp: LinearProgram):
    a, b, c = lp.a_eq, lp.b_eq, lp.objective
    if lp.upper is None:
        return a, b, c
    finite = np.nonzero(np.isfinite(lp.upper))[0]
    n, k = c.size, finite.size
    rows = np.zeros((k, n + k))
    rows[np.arange(k), finite] = 1.0
    rows[np.arange(k), n + np.arange(k)] = 1.0
    a_std = np.vstack([np.hstack([a, np.zeros((a.shape[0], k))]), rows])
    return a_std, np.concatenate([b, lp.upper[finite]]), np.concatenate([c, np.zeros(k)])


def solve_lp(lp: LinearProgram, max_iter: int = 100_000) -> LPSolution:
    a, b, c = _standard_form(lp)
    m, n = a.shape
    sign = np.where(b < 0, -1.0, 1.0)
    a_pos, b_pos = a * sign[:, None], b * sign

    # phase one: minimize the sum of artificials
    tab = np.hstack([a_pos, np.eye(m), b_pos[:, None]])
    basis = list(range(n, n + m))
    cost = np.zeros(n + m + 1)
    cost[n : n + m] = -1.0
    cost -= cost[basis] @ tab  # reduced costs relative to the artificial basis
    allowed = np.ones(n + m, dtype=bool)
    iters = _run(tab, cost, basis, allowed, max_iter)
    infeas = float(np.sum(tab[[i for i, j in enumerate(basis) if j >= n], -1]))
    if infeas > LP_FEAS_TOL:
        raise InfeasibleError(f"no feasible point (phase-one residual {infeas:.3e})")

    # drive zero-level artificials out of the basis; rows where that fails are redundant
    keep = []
    for i in range(m):
        if basis[i] >= n:
            cols = np.nonzero(np.abs(tab[i, :n]) > PIVOT_TOL)[0]
            if cols.size == 0:
                continue
            _pivot(tab, cost, i, int(cols[0]))
            basis[i] = int(cols[0])
        keep.append(i)
    tab = tab[keep]
    basis = [basis[i] for i in keep]

    # phase two on the original columns
    tab = np.hstack([tab[:, :n], tab[:, -1:]])
    cost = np.concatenate([c, [0.0]])
    cost -= cost[basis] @ tab
    iters += _run(tab, cost, basis, np.ones(n, dtype=bool), max_iter)

    x = np.zeros(n)
    x[basis] = tab[:, -1]
    x[np.abs(x) < PIVOT_TOL] = 0.0

    # duals from the original kept rows: B^T y = c_B
    a_kept = a[keep]
    bmat = a_kept[:, basis]
    y = np.linalg.solve(bmat.T, c[basis])
    reduced = c - a_kept.T @ y
    primal_res = float(np.max(np.abs(a @ x - b), initial=0.0))
    slack_res = float(np.max(np.abs(x * reduced), initial=0.0))

    nv = lp.n_vars
    return LPSolution(
        x=x[:nv],
        value=float(c @ x),
        duals=y,
        reduced_costs=reduced[:nv],
        basis=tuple(basis),
        iterations=iters,
        primal_residual=primal_res,
        slackness_residual=slack_res,
    )
