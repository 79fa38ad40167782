"""Simulator for the n-person quantum Russian roulette."""

from .averaging import (
    AveragingSpec,
    Estimate,
    FixedGamma,
    FourierGrid,
    MonteCarlo,
    SmearedBullet,
    expected_outcome_probability,
    figure_series,
    seeded_stream,
    table1_quantum,
)
from .classical import ClassicalConfig, classical_all_alive_round_probability, classical_game, classical_round
from .errors import ConfigError, QRouletteError, UsageError
from .game import (
    GameConfig,
    PayoffSpec,
    evolve,
    evolve_trace,
    expected_payoffs,
    gamma_from_bullet_probability,
    payoff_sole_survivor,
    payoff_zero_sum,
    schedule_smeared_bullet,
)
from .operators import GateParams, apply_player_op, dense_player_op, single_qubit_u, unitarity_defect
from .statevec import StateVector, all_alive, amplitude, distribution, global_phase_equal

__version__ = "0.1.0"
