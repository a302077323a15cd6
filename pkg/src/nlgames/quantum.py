"""Quantum strategies: pure states measured with spin observables.

Each party measures, for each of its settings, the observable ``n·σ`` with
``n`` given by spherical angles ``(theta, phi)``. Behaviors and Bell-operator
values are evaluated two ways: directly from tensor products of projectors
(:func:`quantum_behavior`, :func:`operator_expectation`), and through the
state's Pauli correlation tensor, which is what the optimizer uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import qcore
from .errors import ShapeMismatchError
from .games import (
    Behavior,
    Game,
    XorGameSpec,
    correlation_coefficients,
    digit_table,
    winning_probability,
)
from .neldermead import nelder_mead_batch

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class PureState:
    n_parties: int
    ket: np.ndarray

    def __post_init__(self):
        k = qcore.ket(self.ket)
        if k.size != 2**self.n_parties:
            raise ShapeMismatchError(f"ket of dim {k.size} for {self.n_parties} qubits")
        object.__setattr__(self, "ket", k)


def ghz_state(n_parties: int = 3) -> PureState:
    """``(|0...0> + |1...1>)/sqrt(2)``; for two parties this is the CHSH-optimal Bell state."""
    amp = np.zeros(2**n_parties)
    amp[[0, -1]] = 1 / np.sqrt(2)
    return PureState(n_parties, amp)


def w_state(n_parties: int = 3) -> PureState:
    """Uniform superposition of the single-excitation basis states (|001>, |010>, |100> for three)."""
    amp = np.zeros(2**n_parties)
    amp[[2**k for k in range(n_parties)]] = 1 / np.sqrt(n_parties)
    return PureState(n_parties, amp)


def chsh_optimal_state() -> PureState:
    return ghz_state(2)


NAMED_STATES = {"ghz": ghz_state, "w": w_state, "bell": ghz_state}


def named_state(name: str, n_parties: int) -> PureState:
    try:
        return NAMED_STATES[name](n_parties)
    except KeyError:
        raise ValueError(f"unknown state {name!r}; known: {', '.join(NAMED_STATES)}") from None


def canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    """Same direction with ``theta`` in ``[0, pi]`` and ``phi`` in ``[0, 2pi)``."""
    theta = float(np.mod(theta, TWO_PI))
    phi = float(phi)
    if theta > np.pi:
        theta = TWO_PI - theta
        phi += np.pi
    phi = float(np.mod(phi, TWO_PI))
    if phi >= TWO_PI:
        phi = 0.0
    return theta, phi


@dataclass(frozen=True, eq=False)
class MeasurementSetup:
    """Angles ``angles[party, setting] = (theta, phi)``.

    Angles are stored as given; :meth:`canonical` maps them onto
    ``theta in [0, pi]``, ``phi in [0, 2pi)`` without changing any observable.
    """

    angles: np.ndarray

    def __post_init__(self):
        a = np.array(self.angles, dtype=np.float64)
        if a.ndim != 3 or a.shape[2] != 2:
            raise ShapeMismatchError(f"angles must have shape (parties, settings, 2), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("angles must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @classmethod
    def from_flat(cls, flat, n_parties: int, n_settings: int = 2) -> "MeasurementSetup":
        return cls(np.asarray(flat, dtype=np.float64).reshape(n_parties, n_settings, 2))

    @property
    def n_parties(self) -> int:
        return self.angles.shape[0]

    @property
    def n_settings(self) -> int:
        return self.angles.shape[1]

    def canonical(self) -> "MeasurementSetup":
        out = np.empty_like(self.angles)
        for k, x in product(range(self.n_parties), range(self.n_settings)):
            out[k, x] = canonical_angles(*self.angles[k, x])
        return MeasurementSetup(out)

    def observable(self, party: int, setting: int) -> np.ndarray:
        return qcore.bloch_observable(*self.angles[party, setting])

    def bloch_vectors(self) -> np.ndarray:
        """Array ``(parties, settings, 3)`` of measurement directions."""
        return _bloch_vectors(self.angles)

    def as_lists(self) -> list:
        return self.angles.tolist()


def _bloch_vectors(angles: np.ndarray) -> np.ndarray:
    sin, cos = np.sin(angles), np.cos(angles)
    out = np.empty(angles.shape[:-1] + (3,))
    out[..., 0] = sin[..., 0] * cos[..., 1]
    out[..., 1] = sin[..., 0] * sin[..., 1]
    out[..., 2] = cos[..., 0]
    return out


def _check_shapes(state: PureState, setup: MeasurementSetup) -> None:
    if setup.n_parties != state.n_parties:
        raise ShapeMismatchError(f"setup for {setup.n_parties} parties, state has {state.n_parties}")


def quantum_behavior(state: PureState, setup: MeasurementSetup) -> Behavior:
    """``p(o|x) = <psi| ⊗_k P_k(o_k|x_k) |psi>`` built from explicit projectors."""
    _check_shapes(state, setup)
    n, m = setup.n_parties, setup.n_settings
    projectors = [
        [[qcore.outcome_projector(setup.observable(k, x), o) for o in (0, 1)] for x in range(m)]
        for k in range(n)
    ]
    outs = digit_table(n, 2)
    sets = digit_table(n, m)
    table = np.empty((2**n, m**n))
    for xi, x in enumerate(sets):
        for oi, o in enumerate(outs):
            op = qcore.tensor_all(projectors[k][x[k]][o[k]] for k in range(n))
            table[oi, xi] = qcore.expectation(op, state.ket)
    return Behavior(n, m, 2, table)


def direct_correlators(state: PureState, setup: MeasurementSetup) -> np.ndarray:
    """Full correlators ``E(x) = <psi| ⊗_k A_k(x_k) |psi>`` indexed by setting index."""
    _check_shapes(state, setup)
    n, m = setup.n_parties, setup.n_settings
    corr = np.empty(m**n)
    for xi, x in enumerate(digit_table(n, m)):
        op = qcore.tensor_all(setup.observable(k, x[k]) for k in range(n))
        corr[xi] = qcore.expectation(op, state.ket)
    return corr


def operator_expectation(spec: XorGameSpec, state: PureState, setup: MeasurementSetup) -> float:
    """Expectation of the game's Bell operator ``sum_x c(x) ⊗_k A_k(x_k)``."""
    if spec.n_parties != state.n_parties or spec.n_settings != setup.n_settings:
        raise ShapeMismatchError("game, state and setup shapes differ")
    return float(correlation_coefficients(spec) @ direct_correlators(state, setup))


def pauli_tensor(state: PureState) -> np.ndarray:
    """``T[i_0, ..., i_{n-1}] = <psi| σ_{i_0} ⊗ ... ⊗ σ_{i_{n-1}} |psi>`` with σ_0 = I."""
    n = state.n_parties
    t = np.empty((4,) * n)
    for idx in product(range(4), repeat=n):
        op = qcore.tensor_all(qcore.PAULIS[i] for i in idx)
        t[idx] = np.vdot(state.ket, op @ state.ket).real
    return t


def _contract(tensor: np.ndarray, factors: list[np.ndarray]) -> np.ndarray:
    """Batched contraction of each party's tensor index with its factor.

    ``tensor`` has one axis of width ``w`` per party; ``factors[k]`` has shape
    ``(batch, f_k, w)``. Returns ``(batch, f_0 * f_1 * ...)`` with party 0's
    index most significant.
    """
    width = tensor.shape[0]
    r = tensor.reshape(1, 1, -1)  # (batch, done, remaining)
    for f in factors:
        rest = r.shape[2] // width
        r = np.matmul(f[:, None, :, :], r.reshape(r.shape[0], r.shape[1], width, rest))
        r = r.reshape(f.shape[0], -1, rest)
    return r.reshape(r.shape[0], -1)


class _Objective:
    """Batched evaluation of a game objective on a fixed state.

    Points are flat angle vectors ordered ``(party, setting, theta/phi)``.
    """

    def __init__(self, target: Game | XorGameSpec, state: PureState):
        self.n = n = state.n_parties
        if target.n_parties != n:
            raise ShapeMismatchError(f"game has {target.n_parties} parties, state has {n}")
        self.m = m = target.n_settings
        tensor = pauli_tensor(state)
        if isinstance(target, XorGameSpec):
            self.xor = True
            weights = correlation_coefficients(target) * target.distribution * m**n
            # contraction output has party 0 most significant; setting index has it least
            self.weights_c = np.ascontiguousarray(weights.reshape((m,) * n, order="F")).reshape(-1)
            self.tensor = np.ascontiguousarray(tensor[(slice(1, None),) * n])
        else:
            if target.n_outcomes != 2:
                raise ShapeMismatchError("projective spin measurements have two outcomes")
            self.xor = False
            self.game = target
            self.tensor = tensor
            self.sign = np.array([0.5, -0.5])
            # axes (x0, o0, x1, o1, ...) -> (o_{n-1}..o_0, x_{n-1}..x_0)
            self.perm = [0] + [2 * k + 2 for k in reversed(range(n))] + [2 * k + 1 for k in reversed(range(n))]

    def _vectors(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        return _bloch_vectors(pts.reshape(pts.shape[0], self.n, self.m, 2))

    def correlators(self, points) -> np.ndarray:
        """Full correlators, shape ``(batch, n_setting_tuples)`` in setting-index order."""
        vecs = self._vectors(points)
        raw = _contract(self.tensor, [vecs[:, k] for k in range(self.n)])
        batch = raw.shape[0]
        return raw.reshape((batch,) + (self.m,) * self.n).transpose([0] + list(range(self.n, 0, -1))).reshape(batch, -1)

    def tables(self, points) -> np.ndarray:
        """Behavior tables, shape ``(batch, n_outcome_tuples, n_setting_tuples)``."""
        vecs = self._vectors(points)
        batch = vecs.shape[0]
        factors = []
        for k in range(self.n):
            # f[b, (x, o), :] = (1, (-1)^o n_x) / 2
            f = np.empty((batch, self.m, 2, 4))
            f[..., 0] = 0.5
            f[..., 1:] = self.sign[None, None, :, None] * vecs[:, k, :, None, :]
            factors.append(f.reshape(batch, 2 * self.m, 4))
        r = _contract(self.tensor, factors).reshape((batch,) + (self.m, 2) * self.n)
        return r.transpose(self.perm).reshape(batch, 2**self.n, self.m**self.n)

    def values(self, points) -> np.ndarray:
        if self.xor:
            vecs = self._vectors(points)
            return _contract(self.tensor, [vecs[:, k] for k in range(self.n)]) @ self.weights_c
        tabs = self.tables(points)
        return np.sum(self.game.predicate[None] * tabs, axis=1) @ self.game.distribution

    def __call__(self, point) -> float:
        return float(self.values(np.asarray(point)[None, :])[0])


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 100
    seed: int = 42
    max_iters: int = 2000
    tol: float = 1e-10
    step: float = 0.5

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("at least one restart is required")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    best_value: float
    best_setup: MeasurementSetup
    restarts_run: int
    stationarity_residual: float
    history: tuple[float, ...] = field(default=())
    best_restart: int = 0


def initial_angles(seed: int, restart: int, n_parties: int, n_settings: int) -> np.ndarray:
    """Uniformly random starting angles, keyed by ``(seed, restart)``."""
    rng = np.random.default_rng([seed, restart])
    theta = rng.uniform(0.0, np.pi, size=(n_parties, n_settings))
    phi = rng.uniform(0.0, TWO_PI, size=(n_parties, n_settings))
    return np.stack([theta, phi], axis=-1).reshape(-1)


def stationarity_residual(func, x: np.ndarray, h: float = 1e-5) -> float:
    """Largest central-difference partial derivative of ``func`` at ``x``."""
    x = np.asarray(x, dtype=np.float64)
    worst = 0.0
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        worst = max(worst, abs(func(x + e) - func(x - e)) / (2 * h))
    return worst


def optimize_game(
    target: Game | XorGameSpec, state: PureState, config: OptimizerConfig | None = None
) -> OptimizationResult:
    """Maximize over measurement angles with multi-start Nelder-Mead.

    For a :class:`Game` the objective is the winning probability. For an
    :class:`XorGameSpec` it is ``sum_x N p(x) c(x) E(x)`` (``N`` setting
    tuples), which is the Bell-operator value for uniform settings and is
    always related to the winning probability by ``P = (1 + value / N) / 2``.

    Restarts are independent and keyed by ``(seed, restart)``; the best one
    wins, ties going to the lowest restart index.
    """
    config = config or OptimizerConfig()
    objective = _Objective(target, state)
    n, m = objective.n, objective.m

    starts = np.array([initial_angles(config.seed, r, n, m) for r in range(config.restarts)])
    res = nelder_mead_batch(
        lambda pts: -objective.values(pts), starts, step=config.step, max_iters=config.max_iters, xtol=config.tol
    )
    history = -res.fun
    best_r = int(np.argmax(history))  # first maximal restart on ties
    best_x, best_val = res.x[best_r], float(history[best_r])

    residual = stationarity_residual(objective, best_x)
    setup = MeasurementSetup.from_flat(best_x, n, m).canonical()
    return OptimizationResult(
        best_value=best_val,
        best_setup=setup,
        restarts_run=config.restarts,
        stationarity_residual=residual,
        history=tuple(float(v) for v in history),
        best_restart=best_r,
    )


def game_value(target: Game | XorGameSpec, state: PureState, setup: MeasurementSetup) -> float:
    """Objective of :func:`optimize_game` at a given setup, via the direct projector route."""
    if isinstance(target, XorGameSpec):
        if target.n_parties != state.n_parties or target.n_settings != setup.n_settings:
            raise ShapeMismatchError("game, state and setup shapes differ")
        weights = correlation_coefficients(target) * target.distribution * target.n_settings**target.n_parties
        return float(weights @ direct_correlators(state, setup))
    return winning_probability(target, quantum_behavior(state, setup))


# Published optimal GHZ angles, (theta, phi) per party A, B, C and setting 0, 1.
_PUBLISHED_ANGLES = {
    "mermin_a": [
        [[3.1149, 2.5271], [1.5708, 0.4608]],
        [[1.5708, 1.7282], [4.7124, 1.7282]],
        [[4.7124, 0.9526], [4.7124, 4.0942]],
    ],
    "mermin_b": [
        [[4.7124, 1.6707], [4.7124, 1.6737]],
        [[1.5708, 4.6120], [4.7124, 1.4735]],
        [[4.7124, 6.2806], [4.7124, 4.0005]],
    ],
}


def published_angle_sets() -> dict[str, MeasurementSetup]:
    """Published GHZ measurement angles for the two Mermin-box games, verbatim (not canonicalized)."""
    return {name: MeasurementSetup(np.array(a)) for name, a in _PUBLISHED_ANGLES.items()}
