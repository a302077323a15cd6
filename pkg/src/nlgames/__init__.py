"""Maximum winning probabilities of nonlocal games under classical, quantum and no-signaling theories."""

from .classical import DeterministicStrategy, classical_max, classical_operator_max
from .fur import FurMeasurement, FurScenario, p_total, zeta
from .games import (
    Behavior,
    Game,
    XorGameSpec,
    box_behavior,
    builtin_games,
    correlation_coefficients,
    game_from_json,
    winning_probability,
    xor_to_game,
)
from .nosignal import is_no_signaling, ns_constraints, ns_max
from .quantum import (
    MeasurementSetup,
    OptimizationResult,
    OptimizerConfig,
    PureState,
    chsh_optimal_state,
    ghz_state,
    operator_expectation,
    optimize_game,
    published_angle_sets,
    quantum_behavior,
    w_state,
)

__version__ = "0.1.0"
