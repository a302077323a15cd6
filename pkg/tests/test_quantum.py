import math

import numpy as np
import pytest

from nlgames import qcore
from nlgames.errors import ShapeMismatchError
from nlgames.games import (
    XorGameSpec,
    builtin_games,
    correlators,
    relabel_game,
    relabel_outcomes,
    winning_probability,
    xor_to_game,
)
from nlgames.nosignal import is_no_signaling
from nlgames.quantum import (
    MeasurementSetup,
    OptimizerConfig,
    PureState,
    _Objective,
    canonical_angles,
    direct_correlators,
    game_value,
    ghz_state,
    initial_angles,
    operator_expectation,
    optimize_game,
    published_angle_sets,
    quantum_behavior,
    w_state,
)

from .conftest import optimized, random_ket

SQ2 = math.sqrt(2)
TSIRELSON_P = 0.5 + 1 / (2 * SQ2)


def random_state(rng, n):
    return PureState(n, random_ket(rng, 2**n))


def random_setup(rng, n, m=2):
    return MeasurementSetup(rng.uniform(-2 * np.pi, 2 * np.pi, size=(n, m, 2)))


def test_named_state_amplitudes():
    assert np.allclose(ghz_state().ket, np.array([1, 0, 0, 0, 0, 0, 0, 1]) / SQ2, atol=1e-15)
    assert np.allclose(w_state().ket, np.array([0, 1, 1, 0, 1, 0, 0, 0]) / math.sqrt(3), atol=1e-15)
    assert np.allclose(ghz_state(2).ket, np.array([1, 0, 0, 1]) / SQ2, atol=1e-15)
    with pytest.raises(ShapeMismatchError):
        PureState(3, np.ones(4))


def test_behavior_examples():
    # |00> measured along z: outcome (0, 0) with certainty
    zz = MeasurementSetup(np.zeros((2, 2, 2)))
    b = quantum_behavior(PureState(2, [1, 0, 0, 0]), zz)
    assert np.allclose(b.table[0], 1.0, atol=1e-15)
    # GHZ measured along x: even parity outcomes only, each with probability 1/4
    xxx = MeasurementSetup(np.tile([np.pi / 2, 0.0], (3, 2, 1)))
    b = quantum_behavior(ghz_state(), xxx)
    assert np.allclose(b.table[:, 0], [0.25, 0, 0, 0.25, 0, 0.25, 0.25, 0], atol=1e-15)


def test_tsirelson_angles():
    setup = MeasurementSetup(
        [[[0, 0], [np.pi / 2, 0]], [[np.pi / 4, 0], [np.pi / 4, np.pi]]]
    )
    chsh = builtin_games()["chsh"]
    assert operator_expectation(chsh, ghz_state(2), setup) == pytest.approx(2 * SQ2, abs=1e-12)
    p = winning_probability(xor_to_game(chsh), quantum_behavior(ghz_state(2), setup))
    assert p == pytest.approx(TSIRELSON_P, abs=1e-12)


def test_closed_form_svetlichny_angles():
    # equatorial measurements on GHZ give E = cos(phi_a + phi_b + phi_c)
    h = np.pi / 2
    setup = MeasurementSetup(
        [[[h, 0], [h, h]], [[h, 0], [h, h]], [[h, 7 * np.pi / 4], [h, np.pi / 4]]]
    )
    sv = builtin_games()["svetlichny"]
    assert operator_expectation(sv, ghz_state(), setup) == pytest.approx(4 * SQ2, abs=1e-12)


def test_z_measurements_on_ghz_give_no_svetlichny_value():
    setup = MeasurementSetup(np.zeros((3, 2, 2)))
    assert abs(operator_expectation(builtin_games()["svetlichny"], ghz_state(), setup)) <= 1e-12


def test_product_state_respects_local_bound(rng):
    chsh = builtin_games()["chsh"]
    for _ in range(100):
        a, b = random_ket(rng, 2), random_ket(rng, 2)
        state = PureState(2, np.kron(a, b))
        assert abs(operator_expectation(chsh, state, random_setup(rng, 2))) <= 2 + 1e-12


def test_quantum_behaviors_are_no_signaling(rng):
    for n in (2, 3):
        for _ in range(50):
            assert is_no_signaling(quantum_behavior(random_state(rng, n), random_setup(rng, n)), tol=1e-10)


def test_identity_family(rng):
    for spec in builtin_games().values():
        game = xor_to_game(spec)
        n_set = 2**spec.n_parties
        for _ in range(50):
            state, setup = random_state(rng, spec.n_parties), random_setup(rng, spec.n_parties)
            direct = winning_probability(game, quantum_behavior(state, setup))
            formula = 0.5 * (1 + operator_expectation(spec, state, setup) / n_set)
            assert abs(direct - formula) <= 1e-12


def test_fast_route_matches_projector_route(rng):
    # the optimizer's Pauli-tensor contraction against explicit kron products
    for spec in builtin_games().values():
        n = spec.n_parties
        for _ in range(20):
            state = random_state(rng, n)
            obj = _Objective(spec, state)
            pts = rng.uniform(-7, 7, size=(3, 4 * n))
            corr = obj.correlators(pts)
            tabs = _Objective(xor_to_game(spec), state).tables(pts)
            for i, p in enumerate(pts):
                setup = MeasurementSetup.from_flat(p, n)
                assert np.max(np.abs(corr[i] - direct_correlators(state, setup))) <= 1e-12
                assert np.max(np.abs(tabs[i] - quantum_behavior(state, setup).table)) <= 1e-12
                assert abs(obj(p) - game_value(spec, state, setup)) <= 1e-12


@pytest.mark.parametrize(
    "theta, phi",
    [(0.3, 1.0), (-0.3, 1.0), (4.0, 0.5), (7.0, -3.0), (np.pi, 0.0), (2 * np.pi, 6.5)],
)
def test_canonical_angles_keep_direction(theta, phi):
    t, p = canonical_angles(theta, phi)
    assert 0 <= t <= np.pi and 0 <= p < 2 * np.pi
    assert np.max(np.abs(qcore.bloch_observable(t, p) - qcore.bloch_observable(theta, phi))) <= 1e-12


def test_relabel_covariance(rng):
    # flipping a party's outcome labels on one setting is measuring -n instead of n
    for spec in builtin_games().values():
        n = spec.n_parties
        game = xor_to_game(spec)
        for _ in range(10):
            state, setup = random_state(rng, n), random_setup(rng, n)
            party, setting = int(rng.integers(n)), int(rng.integers(2))
            angles = setup.angles.copy()
            theta, phi = angles[party, setting]
            angles[party, setting] = (np.pi - theta, phi + np.pi)
            flipped = quantum_behavior(state, MeasurementSetup(angles))
            expected = relabel_outcomes(quantum_behavior(state, setup), party, setting)
            assert np.max(np.abs(flipped.table - expected.table)) <= 1e-12
            moved = winning_probability(relabel_game(game, party, setting), flipped)
            assert abs(moved - winning_probability(game, quantum_behavior(state, setup))) <= 1e-12


def test_svetlichny_ghz_cap_and_reach():
    cap = 0.5 * (1 + 4 * SQ2 / 8)
    res = optimized("svetlichny", "ghz", restarts=50)
    p = 0.5 * (1 + res.best_value / 8)
    assert p <= cap + 1e-9
    assert abs(p - cap) <= 1e-4
    assert all(0.5 * (1 + v / 8) <= cap + 1e-9 for v in res.history)


@pytest.mark.parametrize(
    "game, state, value",
    [("chsh", "bell", 2 * SQ2), ("svetlichny", "w", 4.354), ("mermin_a", "ghz", 4.0), ("mermin_b", "w", 6.0)],
)
def test_optimum_is_stationary(game, state, value):
    res = optimized(game, state)
    assert res.stationarity_residual <= 1e-3
    assert abs(res.best_value - value) <= 5e-3
    # the reported setup reproduces the value through the projector route
    spec = builtin_games()[game]
    assert abs(game_value(spec, _state(state, spec.n_parties), res.best_setup) - res.best_value) <= 1e-9
    assert np.all((res.best_setup.angles[..., 0] >= 0) & (res.best_setup.angles[..., 0] <= np.pi))
    assert np.all((res.best_setup.angles[..., 1] >= 0) & (res.best_setup.angles[..., 1] < 2 * np.pi))


def _state(name, n):
    return w_state(n) if name == "w" else ghz_state(n)


def test_general_game_objective_matches_xor_objective():
    spec = builtin_games()["chsh"]
    config = OptimizerConfig(restarts=8, seed=3)
    xor_res = optimize_game(spec, ghz_state(2), config)
    game_res = optimize_game(xor_to_game(spec), ghz_state(2), config)
    assert abs(0.5 * (1 + xor_res.best_value / 4) - game_res.best_value) <= 1e-6


def test_optimizer_is_deterministic():
    spec = builtin_games()["mermin_a"]
    config = OptimizerConfig(restarts=5, seed=7)
    a = optimize_game(spec, w_state(), config)
    b = optimize_game(spec, w_state(), config)
    assert a.best_value == b.best_value
    assert a.history == b.history
    assert np.array_equal(a.best_setup.angles, b.best_setup.angles)
    assert np.array_equal(initial_angles(7, 3, 3, 2), initial_angles(7, 3, 3, 2))
    assert not np.array_equal(initial_angles(7, 3, 3, 2), initial_angles(7, 4, 3, 2))


def test_restart_count_validated():
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)


def test_published_angles():
    sets = published_angle_sets()
    games = builtin_games()
    assert operator_expectation(games["mermin_a"], ghz_state(), sets["mermin_a"]) == pytest.approx(4.0, abs=1e-2)
    # angles are kept exactly as printed
    assert sets["mermin_b"].angles[0, 0, 0] == 4.7124


def test_random_xor_game_with_nonuniform_distribution(rng):
    dist = rng.dirichlet(np.ones(4))
    spec = XorGameSpec(2, [0, 0, 0, 1], dist)
    res = optimize_game(spec, ghz_state(2), OptimizerConfig(restarts=10))
    setup = res.best_setup
    p_direct = winning_probability(xor_to_game(spec), quantum_behavior(ghz_state(2), setup))
    assert abs(p_direct - 0.5 * (1 + res.best_value / 4)) <= 1e-12
    assert abs(p_direct - 0.5 * (1 + dist @ (np.array([1, 1, 1, -1]) * correlators(quantum_behavior(ghz_state(2), setup))))) <= 1e-12
