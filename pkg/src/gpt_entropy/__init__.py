"""Measurement entropies for classical, quantum and box-world theories."""

from .boxworld import (
    AdaptiveStrategy,
    BoxState,
    apply_strategy,
    chsh_value,
    condition_box,
    enumerate_adaptive_strategies,
    enumerate_pure_states,
    marginal_box,
    noisy_pr,
    pr_box,
    tensor_box,
    validate_nonsignalling,
)
from .classical import ClassicalState, classical_state
from .config import Limits
from .core import Effect, Measurement, OutcomeDistribution, apply_measurement, coarse_grain, distance
from .entropy import (
    EntropyReport,
    accessible_info,
    cond_plus,
    cond_standard,
    decomposition_entropy,
    hhat,
    hhat_alpha,
    mutual,
    mutual_plus,
)
from .errors import GPTError, GuardExceeded, SchemaError, SignallingError, ValidationError
from .games import build_ic_state, build_rac_state, build_rac_state_noisy, ic_inequality_value
from .quantum import DensityMatrix, density_matrix

__version__ = "0.1.0"
