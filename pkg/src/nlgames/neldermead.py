"""Nelder-Mead simplex minimization, run on many starting points in lockstep.

Each start follows exactly the textbook algorithm on its own simplex; the
batch only shares the objective calls, which is what makes a hundred
restarts on a 12-parameter problem cheap in numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class NMResult:
    x: np.ndarray  # (starts, dim) best vertex per start
    fun: np.ndarray  # (starts,)
    iterations: np.ndarray
    converged: np.ndarray
    evaluations: int


def nelder_mead_batch(
    func: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    *,
    step: float = 0.5,
    max_iters: int = 2000,
    xtol: float = 1e-10,
) -> NMResult:
    """Minimize ``func`` from every row of ``x0`` independently.

    ``func`` maps a ``(k, dim)`` array of points to ``k`` values. A start
    stops once all its vertices lie within ``xtol`` (max-norm) of its best
    vertex, or after ``max_iters`` iterations. Coefficients are Gao and Han's
    dimension-adaptive ones.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=np.float64))
    n_starts, dim = x0.shape
    alpha, gamma = 1.0, 1.0 + 2.0 / dim
    rho, sigma = 0.75 - 1.0 / (2.0 * dim), 1.0 - 1.0 / dim

    sim = x0[:, None, :] + np.vstack([np.zeros(dim), step * np.eye(dim)])[None, :, :]
    fs = func(sim.reshape(-1, dim)).reshape(n_starts, dim + 1)
    nfev = sim.shape[0] * sim.shape[1]
    iters = np.zeros(n_starts, dtype=np.int64)
    converged = np.zeros(n_starts, dtype=bool)
    active = np.ones(n_starts, dtype=bool)

    for _ in range(max_iters + 1):
        order = np.argsort(fs, axis=1, kind="stable")
        sim = np.take_along_axis(sim, order[:, :, None], axis=1)
        fs = np.take_along_axis(fs, order, axis=1)
        spread = np.max(np.abs(sim[:, 1:] - sim[:, :1]), axis=(1, 2))
        converged |= active & (spread <= xtol)
        active &= ~converged
        active &= iters < max_iters
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        iters[idx] += 1

        s, f = sim[idx], fs[idx]
        centroid = s[:, :-1].mean(axis=1)
        worst = s[:, -1]
        xr = centroid + alpha * (centroid - worst)
        fr = func(xr)
        nfev += idx.size
        new_x, new_f = xr.copy(), fr.copy()
        shrink = np.zeros(idx.size, dtype=bool)

        expand = fr < f[:, 0]
        if expand.any():
            xe = centroid[expand] + gamma * (xr[expand] - centroid[expand])
            fe = func(xe)
            nfev += xe.shape[0]
            better = fe < fr[expand]
            rows = np.nonzero(expand)[0][better]
            new_x[rows], new_f[rows] = xe[better], fe[better]

        outside = (fr >= f[:, -2]) & (fr < f[:, -1])
        if outside.any():
            xc = centroid[outside] + rho * (xr[outside] - centroid[outside])
            fc = func(xc)
            nfev += xc.shape[0]
            ok = fc <= fr[outside]
            rows = np.nonzero(outside)[0]
            new_x[rows[ok]], new_f[rows[ok]] = xc[ok], fc[ok]
            shrink[rows[~ok]] = True

        inside = fr >= f[:, -1]
        if inside.any():
            xc = centroid[inside] - rho * (centroid[inside] - worst[inside])
            fc = func(xc)
            nfev += xc.shape[0]
            ok = fc < f[inside, -1]
            rows = np.nonzero(inside)[0]
            new_x[rows[ok]], new_f[rows[ok]] = xc[ok], fc[ok]
            shrink[rows[~ok]] = True

        replace = ~shrink
        s[replace, -1], f[replace, -1] = new_x[replace], new_f[replace]
        if shrink.any():
            ss = s[shrink]
            ss[:, 1:] = ss[:, :1] + sigma * (ss[:, 1:] - ss[:, :1])
            f[shrink, 1:] = func(ss[:, 1:].reshape(-1, dim)).reshape(-1, dim)
            nfev += ss.shape[0] * dim
            s[shrink] = ss
        sim[idx], fs[idx] = s, f

    best = np.argmin(fs, axis=1)
    rows = np.arange(n_starts)
    return NMResult(sim[rows, best].copy(), fs[rows, best].copy(), iters, converged, nfev)


def nelder_mead(func: Callable[[np.ndarray], float], x0, **kwargs) -> NMResult:
    """Single-start convenience wrapper around :func:`nelder_mead_batch`."""
    return nelder_mead_batch(lambda pts: np.array([func(p) for p in pts]), np.asarray(x0)[None, :], **kwargs)
