"""
Equilibrium searches: positional enumeration and support-based stationary search.
"""

from src.solvers.results import SearchResult, SearchVerdict
from src.solvers.supports import SupportError, count_supports, enumerate_supports, reach_sets
from src.solvers.posne import DEFAULT_POSNE_CAP, solve_posne
from src.solvers.formula import FormulaError, RealFormula, build_statne_formula, profile_assignment
from src.solvers.smt_bridge import SolverAnswer, SolverBridge, SolverError, SolverUnavailable, parse_model
from src.solvers.statne import DEFAULT_STATNE_CAP, emit_formulas, solve_statne

__all__ = [
    'SearchResult',
    'SearchVerdict',
    'SupportError',
    'count_supports',
    'enumerate_supports',
    'reach_sets',
    'DEFAULT_POSNE_CAP',
    'solve_posne',
    'FormulaError',
    'RealFormula',
    'build_statne_formula',
    'profile_assignment',
    'SolverAnswer',
    'SolverBridge',
    'SolverError',
    'SolverUnavailable',
    'parse_model',
    'DEFAULT_STATNE_CAP',
    'emit_formulas',
    'solve_statne',
]
