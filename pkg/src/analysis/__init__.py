"""
Payoffs, best responses and equilibrium checks for strategy profiles.
"""

from src.analysis.profiles import (
    FiniteStateProfile,
    MemoryMachine,
    PositionalProfile,
    ProfileError,
    StationaryProfile,
    load_profile,
    profile_from_dict,
    profile_to_dict,
    random_stationary_profile,
    save_profile,
)
from src.analysis.markov import (
    TerminalDistribution,
    reachable_support,
    stationary_payoff,
    terminal_distribution,
    value_vector,
)
from src.analysis.product import MemoryBlowup, build_product, finite_state_payoff
from src.analysis.best_response import (
    best_response_by_policy_iteration,
    best_response_strategy,
    best_response_value,
)
from src.analysis.equilibrium import NeVerdict, ThresholdError, Thresholds, verify_finite_state_ne, verify_ne

__all__ = [
    'FiniteStateProfile',
    'MemoryMachine',
    'PositionalProfile',
    'ProfileError',
    'StationaryProfile',
    'load_profile',
    'profile_from_dict',
    'profile_to_dict',
    'random_stationary_profile',
    'save_profile',
    'TerminalDistribution',
    'reachable_support',
    'stationary_payoff',
    'terminal_distribution',
    'value_vector',
    'MemoryBlowup',
    'build_product',
    'finite_state_payoff',
    'best_response_by_policy_iteration',
    'best_response_strategy',
    'best_response_value',
    'NeVerdict',
    'ThresholdError',
    'Thresholds',
    'verify_finite_state_ne',
    'verify_ne',
]
