#!/usr/bin/env python3
"""
Exact Linear Systems

Gauss-Jordan elimination over the rationals. Used for Markov-chain
reachability values, so the systems are square and, once restricted to the
vertices that can still reach the target, nonsingular.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from src.core import SsmgError


class SingularSystem(SsmgError):
    """Raised when a linear system is rank-deficient."""
    pass


@dataclass(frozen=True)
class LinearSystem:
    """Dense system A·x = b."""
    matrix: Tuple[Tuple[Fraction, ...], ...]
    rhs: Tuple[Fraction, ...]

    def __post_init__(self):
        rows = len(self.matrix)
        if len(self.rhs) != rows:
            raise ValueError(f"rhs has {len(self.rhs)} entries for {rows} rows")
        widths = {len(row) for row in self.matrix}
        if len(widths) > 1:
            raise ValueError("matrix rows have different lengths")

    @classmethod
    def of(cls, matrix: Sequence[Sequence], rhs: Sequence) -> 'LinearSystem':
        """Build a system, converting every entry to Fraction."""
        return cls(
            matrix=tuple(tuple(Fraction(a) for a in row) for row in matrix),
            rhs=tuple(Fraction(b) for b in rhs),
        )

    @property
    def size(self) -> int:
        return len(self.rhs)


def solve_system(system: LinearSystem) -> List[Fraction]:
    """Solve a square nonsingular system exactly

    Args:
        system: The system to solve

    Returns:
        Solution vector x with A·x = b

    Raises:
        SingularSystem: If the matrix is not square or is rank-deficient
    """
    n = system.size
    if any(len(row) != n for row in system.matrix):
        raise SingularSystem(f"matrix is not square ({n} rows)")

    # augmented rows
    rows = [list(row) + [b] for row, b in zip(system.matrix, system.rhs)]

    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise SingularSystem(f"no pivot in column {col}")
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]

        pivot_row = rows[col]
        inverse = 1 / pivot_row[col]
        nonzero = [j for j in range(col, n + 1) if pivot_row[j] != 0]
        for j in nonzero:
            pivot_row[j] *= inverse

        for r in range(n):
            if r == col:
                continue
            factor = rows[r][col]
            if factor == 0:
                continue
            target = rows[r]
            for j in nonzero:
                target[j] -= factor * pivot_row[j]

    return [rows[i][n] for i in range(n)]
