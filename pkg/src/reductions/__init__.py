"""
Hardness gadgets (SAT, SqrtSum, two-counter machines), the built-in example
games and exact checkers for gadget-level identities.
"""

from src.reductions.errors import InstanceError
from src.reductions.sat import (
    CnfFormula,
    gen_sat_game,
    is_satisfiable,
    parse_dimacs,
    sat_equilibrium_profile,
    sat_thresholds,
    satisfying_assignment,
)
from src.reductions.sqrtsum import (
    DomainError,
    GpMaximum,
    SqrtSumCheck,
    SqrtSumInstance,
    gen_sqrtsum_game,
    gp_max_payoff,
    parse_sqrtsum,
    sqrtsum_threshold_check,
)
from src.reductions.two_counter import (
    CounterCapExceeded,
    Halt,
    Inc,
    Label,
    Test,
    TwoCounterMachine,
    gen_2cm_game,
    intended_2cm_profile,
    parse_machine,
    segment_probability,
    simulate,
)
from src.reductions.bounded import BoundedPayoff, bounded_payoff
from src.reductions.examples import EXAMPLE_NAMES, ExampleGame, UnknownExample, example_game

__all__ = [
    'InstanceError',
    'CnfFormula',
    'gen_sat_game',
    'is_satisfiable',
    'parse_dimacs',
    'sat_equilibrium_profile',
    'sat_thresholds',
    'satisfying_assignment',
    'DomainError',
    'GpMaximum',
    'SqrtSumCheck',
    'SqrtSumInstance',
    'gen_sqrtsum_game',
    'gp_max_payoff',
    'parse_sqrtsum',
    'sqrtsum_threshold_check',
    'CounterCapExceeded',
    'Halt',
    'Inc',
    'Label',
    'Test',
    'TwoCounterMachine',
    'gen_2cm_game',
    'intended_2cm_profile',
    'parse_machine',
    'segment_probability',
    'simulate',
    'BoundedPayoff',
    'bounded_payoff',
    'EXAMPLE_NAMES',
    'ExampleGame',
    'UnknownExample',
    'example_game',
]
