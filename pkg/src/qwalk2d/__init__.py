"""Exact simulation of two-dimensional discrete-time quantum walks.

Alternate-direction walks with a two-level coin, the four-coin Grover walk,
delayed-choice (ancilla-heralded) coins, and a model of the time-multiplexed
optical loop used to read the walk out as photon arrival times.
"""

from .engine import (
    NONLOCALIZED_GROVER_COIN,
    Alternate,
    Grover,
    alternate_step,
    grover_step,
    heralded_distribution,
    marginal_distribution,
    run,
    run_joint,
    run_joint_history,
    run_mixture,
)
from .errors import ConfigurationError, ImpossibleOutcomeError, WalkInputError
from .herald import (
    TwoQubitDensity,
    bell_phi_plus,
    concurrence,
    fidelity,
    herald_coin,
    reduced_coin,
    werner,
)
from .metrics import Distribution, classical_distribution, distribution, mean, similarity, variance
from .operators import GROVER, X, Y, apply_coin, apply_shift, grover_coin, hadamard
from .state import JointState, WalkState, localized_state, named_coin, total_norm

__version__ = "0.1.0"
