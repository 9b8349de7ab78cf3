"""
Exact rational linear algebra and linear programming.

Everything here works on fractions.Fraction and never on floats.
"""

from src.exact.linalg import LinearSystem, SingularSystem, solve_system
from src.exact.simplex import (
    Constraint,
    LinearProgram,
    LinearProgramError,
    LpResult,
    LpStatus,
    Relation,
    lp_min,
)

__all__ = [
    'LinearSystem',
    'SingularSystem',
    'solve_system',
    'Constraint',
    'LinearProgram',
    'LinearProgramError',
    'LpResult',
    'LpStatus',
    'Relation',
    'lp_min',
]
