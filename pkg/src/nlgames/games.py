"""Nonlocal games, behaviors and winning probabilities.

Index conventions, used everywhere in the package:

* a setting tuple ``(s, t, u)`` has index ``s + m*t + m^2*u`` (``s + 2t + 4u``
  in the binary case), party 0 being the least significant digit;
* an outcome tuple ``(a, b, c)`` has index ``a + 2b + 4c`` likewise;
* behavior and predicate tables are arrays of shape
  ``(n_outcome_tuples, n_setting_tuples)``, i.e. ``table[outcome, setting]``.
  Flattened in C order this is the outcome-major layout used by the LP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constants import ARITH_TOL, CLAMP_TOL, RENORM_TOL
from .errors import InvalidDistributionError, ShapeMismatchError


def digits(index: int, base: int, width: int) -> tuple[int, ...]:
    """Per-party digits of a tuple index, party 0 first."""
    out = []
    for _ in range(width):
        index, r = divmod(index, base)
        out.append(r)
    return tuple(out)


def tuple_index(values: Sequence[int], base: int) -> int:
    idx = 0
    for v in reversed(values):
        idx = idx * base + v
    return idx


def digit_table(n_parties: int, base: int) -> np.ndarray:
    """Array of shape ``(base**n_parties, n_parties)`` listing every tuple by index."""
    return np.array([digits(i, base, n_parties) for i in range(base**n_parties)], dtype=np.int64).reshape(
        base**n_parties, n_parties
    )


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _check_distribution(dist: np.ndarray, size: int) -> np.ndarray:
    dist = np.array(dist, dtype=np.float64).reshape(-1)
    if dist.shape != (size,):
        raise ShapeMismatchError(f"distribution has {dist.size} entries, expected {size}")
    if not np.all(np.isfinite(dist)) or np.any(dist < 0):
        raise InvalidDistributionError("setting distribution entries must be finite and non-negative")
    if abs(dist.sum() - 1.0) > ARITH_TOL:
        raise InvalidDistributionError(f"setting distribution sums to {dist.sum()!r}, not 1")
    return _frozen(dist)


def uniform_distribution(n_parties: int, n_settings: int = 2) -> np.ndarray:
    n = n_settings**n_parties
    return _frozen(np.full(n, 1.0 / n))


@dataclass(frozen=True, eq=False)
class Game:
    """A nonlocal game: predicate ``V(outcomes|settings)`` and setting distribution."""

    n_parties: int
    n_settings: int
    n_outcomes: int
    predicate: np.ndarray
    distribution: np.ndarray
    name: str = ""

    def __post_init__(self):
        shape = (self.n_outcomes**self.n_parties, self.n_settings**self.n_parties)
        pred = np.array(self.predicate, dtype=np.int8)
        if pred.shape != shape:
            raise ShapeMismatchError(f"predicate has shape {pred.shape}, expected {shape}")
        if not np.all((pred == 0) | (pred == 1)):
            raise ValueError("predicate entries must be 0 or 1")
        object.__setattr__(self, "predicate", _frozen(pred))
        object.__setattr__(self, "distribution", _check_distribution(self.distribution, shape[1]))

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_parties, self.n_settings, self.n_outcomes)


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional probability table ``p(outcomes|settings)``, see module docstring for layout."""

    n_parties: int
    n_settings: int
    n_outcomes: int
    table: np.ndarray

    def __post_init__(self):
        shape = (self.n_outcomes**self.n_parties, self.n_settings**self.n_parties)
        tab = np.array(self.table, dtype=np.float64)
        if tab.shape != shape:
            raise ShapeMismatchError(f"behavior table has shape {tab.shape}, expected {shape}")
        if not np.all(np.isfinite(tab)):
            raise ValueError("behavior entries must be finite")
        if np.any(tab < -CLAMP_TOL):
            raise InvalidDistributionError(f"negative probability {tab.min():.3e} in behavior")
        tab[tab < 0] = 0.0
        sums = tab.sum(axis=0)
        dev = np.abs(sums - 1.0)
        if np.any(dev > RENORM_TOL):
            raise InvalidDistributionError(f"conditional distributions sum to {sums.min()}..{sums.max()}, not 1")
        if np.any(dev > 0):
            tab = tab / sums
        object.__setattr__(self, "table", _frozen(tab))

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_parties, self.n_settings, self.n_outcomes)

    def prob(self, outcomes: Sequence[int], settings: Sequence[int]) -> float:
        return float(self.table[tuple_index(outcomes, self.n_outcomes), tuple_index(settings, self.n_settings)])

    @classmethod
    def uniform(cls, n_parties: int, n_settings: int = 2, n_outcomes: int = 2) -> "Behavior":
        n_out = n_outcomes**n_parties
        return cls(n_parties, n_settings, n_outcomes, np.full((n_out, n_settings**n_parties), 1.0 / n_out))


@dataclass(frozen=True, eq=False)
class XorGameSpec:
    """XOR game: players win iff the parity of their (binary) outcomes equals ``f(settings)``."""

    n_parties: int
    f: np.ndarray
    distribution: np.ndarray = field(default=None)
    n_settings: int = 2
    name: str = ""

    def __post_init__(self):
        f = np.array(self.f, dtype=np.int8).reshape(-1)
        n = self.n_settings**self.n_parties
        if f.shape != (n,):
            raise ShapeMismatchError(f"f has {f.size} entries, expected {n}")
        if not np.all((f == 0) | (f == 1)):
            raise ValueError("f entries must be 0 or 1")
        object.__setattr__(self, "f", _frozen(f))
        dist = self.distribution
        if dist is None:
            dist = uniform_distribution(self.n_parties, self.n_settings)
        object.__setattr__(self, "distribution", _check_distribution(dist, n))

    @classmethod
    def from_function(
        cls, n_parties: int, fn: Callable[..., int], name: str = "", n_settings: int = 2
    ) -> "XorGameSpec":
        f = [fn(*digits(x, n_settings, n_parties)) & 1 for x in range(n_settings**n_parties)]
        return cls(n_parties, f, n_settings=n_settings, name=name)

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.distribution == self.distribution[0]))


def _outcome_parity(n_parties: int) -> np.ndarray:
    return digit_table(n_parties, 2).sum(axis=1) % 2


def xor_to_game(spec: XorGameSpec) -> Game:
    parity = _outcome_parity(spec.n_parties)
    pred = (parity[:, None] == spec.f[None, :]).astype(np.int8)
    return Game(spec.n_parties, spec.n_settings, 2, pred, spec.distribution, name=spec.name)


def builtin_games() -> dict[str, XorGameSpec]:
    """The CHSH game and the three full-correlation tripartite games, uniform settings."""
    return {
        "chsh": XorGameSpec.from_function(2, lambda s, t: s & t, name="chsh"),
        "svetlichny": XorGameSpec.from_function(
            3, lambda s, t, u: (s & t) ^ (t & u) ^ (u & s), name="svetlichny"
        ),
        "mermin_a": XorGameSpec.from_function(3, lambda s, t, u: (s & t) ^ (s & u), name="mermin_a"),
        "mermin_b": XorGameSpec.from_function(3, lambda s, t, u: s & t & u, name="mermin_b"),
    }


def check_compatible(game: Game, behavior: Behavior) -> None:
    if game.shape != behavior.shape:
        raise ShapeMismatchError(f"game shape {game.shape} does not match behavior shape {behavior.shape}")


def winning_probability(game: Game, behavior: Behavior) -> float:
    """Sum over settings of ``p(settings) * sum_outcomes V * p(outcomes|settings)``."""
    check_compatible(game, behavior)
    per_setting = np.sum(game.predicate * behavior.table, axis=0)
    return float(per_setting @ game.distribution)


def correlation_coefficients(spec: XorGameSpec) -> np.ndarray:
    """Signs ``(-1)^f`` of the correlators in the game's Bell operator."""
    return _frozen(1.0 - 2.0 * spec.f.astype(np.float64))


def correlators(behavior: Behavior, parties: Sequence[int] | None = None) -> np.ndarray:
    """Parity correlators ``E(settings) = sum_o (-1)^(sum of o over parties) p(o|settings)``.

    ``parties`` defaults to all parties (the full correlator).
    """
    if behavior.n_outcomes != 2:
        raise ShapeMismatchError("parity correlators need binary outcomes")
    dig = digit_table(behavior.n_parties, 2)
    sel = list(range(behavior.n_parties)) if parties is None else list(parties)
    signs = 1.0 - 2.0 * (dig[:, sel].sum(axis=1) % 2)
    return signs @ behavior.table


def xor_probability_from_correlators(spec: XorGameSpec, corr: np.ndarray) -> float:
    """Winning probability ``sum_x p(x) (1 + c(x) E(x)) / 2`` of an XOR game.

    For uniform settings this is ``(1 + sum_x c(x) E(x) / N) / 2``.
    """
    c = correlation_coefficients(spec)
    return float(spec.distribution @ (0.5 * (1.0 + c * np.asarray(corr))))


def box_behavior(spec: XorGameSpec) -> Behavior:
    """The no-signaling box that wins ``spec`` with certainty.

    Uniform over the outcome tuples of the required parity.
    """
    parity = _outcome_parity(spec.n_parties)
    weight = 2.0 ** -(spec.n_parties - 1)
    table = np.where(parity[:, None] == spec.f[None, :], weight, 0.0)
    return Behavior(spec.n_parties, spec.n_settings, 2, table)


def _flip_permutation(n: int, m: int, d: int, party: int, setting: int):
    out_dig = digit_table(n, d)
    flipped = out_dig.copy()
    flipped[:, party] = (d - 1) - flipped[:, party]
    perm = np.array([tuple_index(row, d) for row in flipped])
    cols = digit_table(n, m)[:, party] == setting
    return perm, cols


def relabel_outcomes(behavior: Behavior, party: int, setting: int) -> Behavior:
    """Swap the outcome labels of ``party`` whenever it uses ``setting``."""
    perm, cols = _flip_permutation(*behavior.shape, party, setting)
    table = behavior.table.copy()
    table[:, cols] = behavior.table[perm][:, cols]
    return Behavior(*behavior.shape, table)


def relabel_game(game: Game, party: int, setting: int) -> Game:
    """Predicate matching :func:`relabel_outcomes`, so winning probabilities are preserved."""
    perm, cols = _flip_permutation(*game.shape, party, setting)
    pred = game.predicate.copy()
    pred[:, cols] = game.predicate[perm][:, cols]
    return Game(*game.shape, pred, game.distribution, name=game.name)


def game_from_json(obj: dict) -> Game | XorGameSpec:
    """Build a game from its JSON description.

    XOR predicates (``{"type": "xor", "f": [...]}``, ``f`` indexed by setting
    index) give an :class:`XorGameSpec`; explicit predicates
    (``{"type": "explicit", "winning": [[outcomes, settings], ...]}``, each
    entry either a pair of tuple indices or a pair of per-party lists) give a
    :class:`Game`. ``distribution`` is ``"uniform"`` or a list of probabilities.
    """
    if not isinstance(obj, dict):
        raise ValueError("game description must be a JSON object")
    try:
        n = int(obj["parties"])
        m = int(obj.get("settings", 2))
        d = int(obj.get("outcomes", 2))
        pred = obj["predicate"]
        kind = pred["type"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed game description: {exc}") from exc
    if n < 1 or m < 1 or d < 1:
        raise ValueError("parties, settings and outcomes must be positive")
    dist = obj.get("distribution", "uniform")
    if dist == "uniform":
        dist = uniform_distribution(n, m)
    elif not isinstance(dist, list):
        raise ValueError(f"unsupported distribution {dist!r}")
    name = str(obj.get("name", ""))

    if kind == "xor":
        if d != 2:
            raise ValueError("xor predicates need binary outcomes")
        return XorGameSpec(n, pred["f"], dist, n_settings=m, name=name)
    if kind == "explicit":
        table = np.zeros((d**n, m**n), dtype=np.int8)
        for entry in pred["winning"]:
            o, x = entry
            oi = o if isinstance(o, int) else tuple_index(o, d)
            xi = x if isinstance(x, int) else tuple_index(x, m)
            if not (0 <= oi < d**n and 0 <= xi < m**n):
                raise ValueError(f"winning entry {entry!r} out of range")
            table[oi, xi] = 1
        return Game(n, m, d, table, dist, name=name)
    raise ValueError(f"unknown predicate type {kind!r}")


def as_game(target: Game | XorGameSpec) -> Game:
    return xor_to_game(target) if isinstance(target, XorGameSpec) else target
