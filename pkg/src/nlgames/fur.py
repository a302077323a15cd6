"""Fine-grained uncertainty bound for a single qubit.

For measurements ``t`` chosen with probability ``p(t)`` and target outcomes
``x_t``, the success probability on a state ``rho`` is ``Tr[Z rho]`` with

    Z = sum_t p(t) P_t(x_t),

``P_t(x)`` being the outcome projector. The largest value over states is the
top eigenvalue of ``Z``, attained on its eigenvector; mixed states are convex
combinations of pure ones and cannot do better.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qcore
from .constants import ARITH_TOL
from .errors import DimensionError, InvalidDistributionError


@dataclass(frozen=True)
class FurMeasurement:
    probability: float
    theta: float
    phi: float
    target: int


@dataclass(frozen=True)
class FurScenario:
    measurements: tuple[FurMeasurement, ...]

    def __post_init__(self):
        ms = tuple(m if isinstance(m, FurMeasurement) else FurMeasurement(*m) for m in self.measurements)
        if not ms:
            raise ValueError("a scenario needs at least one measurement")
        probs = np.array([m.probability for m in ms], dtype=np.float64)
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > ARITH_TOL:
            raise InvalidDistributionError("measurement probabilities must be non-negative and sum to 1")
        for m in ms:
            if m.target not in (0, 1):
                raise ValueError(f"target outcome must be 0 or 1, got {m.target!r}")
        object.__setattr__(self, "measurements", ms)

    @classmethod
    def of(cls, items: Sequence) -> "FurScenario":
        return cls(tuple(items))

    def operator(self) -> np.ndarray:
        z = np.zeros((2, 2), dtype=np.complex128)
        for m in self.measurements:
            z += m.probability * qcore.outcome_projector(qcore.bloch_observable(m.theta, m.phi), m.target)
        return qcore.matrix(z)


def zeta(scenario: FurScenario) -> tuple[float, np.ndarray]:
    """Maximal total success probability and a state attaining it."""
    return qcore.max_eigenpair(scenario.operator())


def p_total(scenario: FurScenario, state: np.ndarray) -> float:
    state = np.asarray(state)
    if state.shape != (2,):
        raise DimensionError(f"expected a single-qubit ket, got shape {state.shape}")
    return qcore.expectation(scenario.operator(), state)
