#!/usr/bin/env python3
"""
Exact Two-Phase Simplex

Minimises a linear objective over the rationals. The tableau is dense,
pivoting follows Bland's rule (lowest-index entering column, lowest-index
basic variable on ratio ties), so runs terminate and are reproducible.

Free variables are split into a positive and a negative column; every row
gets an artificial variable in phase one.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Tuple

from src.core import SsmgError


class LinearProgramError(SsmgError):
    """Raised when a linear programme has inconsistent dimensions."""
    pass


class Relation(Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    """One row: coefficients · x (relation) bound."""
    coefficients: Tuple[Fraction, ...]
    relation: Relation
    bound: Fraction


@dataclass(frozen=True)
class LinearProgram:
    """minimize objective · x subject to constraints; x_j >= 0 for j in nonneg."""
    objective: Tuple[Fraction, ...]
    constraints: Tuple[Constraint, ...]
    nonneg: FrozenSet[int]

    def __post_init__(self):
        width = len(self.objective)
        for index, constraint in enumerate(self.constraints):
            if len(constraint.coefficients) != width:
                raise LinearProgramError(
                    f"constraint {index} has {len(constraint.coefficients)} "
                    f"coefficients, objective has {width}"
                )
        bad = [j for j in self.nonneg if not 0 <= j < width]
        if bad:
            raise LinearProgramError(f"nonneg indices out of range: {sorted(bad)}")

    @classmethod
    def build(cls, objective: Sequence, constraints: Sequence[Tuple[Sequence, Relation, object]],
              nonneg=None) -> 'LinearProgram':
        """Convenience constructor taking plain numbers.

        Args:
            objective: Objective coefficients
            constraints: (coefficients, relation, bound) triples
            nonneg: Indices of nonnegative variables (default: all)
        """
        width = len(objective)
        return cls(
            objective=tuple(Fraction(c) for c in objective),
            constraints=tuple(
                Constraint(tuple(Fraction(a) for a in coefficients), relation, Fraction(bound))
                for coefficients, relation, bound in constraints
            ),
            nonneg=frozenset(range(width) if nonneg is None else nonneg),
        )

    @property
    def width(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, point: Sequence[Fraction]) -> bool:
        """Check a point against every constraint exactly."""
        if any(point[j] < 0 for j in self.nonneg):
            return False
        for constraint in self.constraints:
            lhs = sum((a * x for a, x in zip(constraint.coefficients, point)), Fraction(0))
            if constraint.relation is Relation.LE and lhs > constraint.bound:
                return False
            if constraint.relation is Relation.GE and lhs < constraint.bound:
                return False
            if constraint.relation is Relation.EQ and lhs != constraint.bound:
                return False
        return True


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    point: Optional[Tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Row-reduced tableau with an attached reduced-cost row."""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis
        self.cost: List[Fraction] = []

    def set_objective(self, costs: Sequence[Fraction]) -> None:
        cost = list(costs) + [Fraction(0)]
        for row, basic in zip(self.rows, self.basis):
            factor = cost[basic]
            if factor != 0:
                for j, a in enumerate(row):
                    if a != 0:
                        cost[j] -= factor * a
        self.cost = cost

    def pivot(self, r: int, c: int) -> None:
        pivot_row = self.rows[r]
        inverse = 1 / pivot_row[c]
        nonzero = [j for j, a in enumerate(pivot_row) if a != 0]
        for j in nonzero:
            pivot_row[j] *= inverse
        for other in self.rows + [self.cost]:
            if other is pivot_row:
                continue
            factor = other[c]
            if factor == 0:
                continue
            for j in nonzero:
                other[j] -= factor * pivot_row[j]
        self.basis[r] = c

    def entering(self, columns: int) -> Optional[int]:
        for j in range(columns):
            if self.cost[j] < 0:
                return j
        return None

    def leaving(self, c: int) -> Optional[int]:
        best: Optional[int] = None
        best_ratio: Optional[Fraction] = None
        for r, row in enumerate(self.rows):
            if row[c] > 0:
                ratio = row[-1] / row[c]
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[r] < self.basis[best])):
                    best, best_ratio = r, ratio
        return best

    def optimise(self, columns: int) -> bool:
        """Run Bland pivots; returns False when the objective is unbounded."""
        while True:
            c = self.entering(columns)
            if c is None:
                return True
            r = self.leaving(c)
            if r is None:
                return False
            self.pivot(r, c)

    @property
    def objective_value(self) -> Fraction:
        return -self.cost[-1]


def lp_min(lp: LinearProgram) -> LpResult:
    """Solve a linear programme exactly

    Args:
        lp: Programme to minimise

    Returns:
        LpResult with status OPTIMAL (point and value set), INFEASIBLE or UNBOUNDED
    """
    # column layout: one column per nonneg variable, two per free variable
    columns: List[Tuple[int, int]] = []
    for j in range(lp.width):
        columns.append((j, 1))
        if j not in lp.nonneg:
            columns.append((j, -1))
    structural = len(columns)

    slack_rows = [i for i, c in enumerate(lp.constraints) if c.relation is not Relation.EQ]
    slack_column = {row: structural + k for k, row in enumerate(slack_rows)}
    real_columns = structural + len(slack_rows)
    row_count = len(lp.constraints)
    total = real_columns + row_count

    rows: List[List[Fraction]] = []
    for i, constraint in enumerate(lp.constraints):
        row = [Fraction(0)] * (total + 1)
        for k, (j, sign) in enumerate(columns):
            row[k] = sign * constraint.coefficients[j]
        if constraint.relation is Relation.LE:
            row[slack_column[i]] = Fraction(1)
        elif constraint.relation is Relation.GE:
            row[slack_column[i]] = Fraction(-1)
        row[-1] = constraint.bound
        if row[-1] < 0:
            row = [-a for a in row]
        row[real_columns + i] = Fraction(1)
        rows.append(row)

    tableau = _Tableau(rows, [real_columns + i for i in range(row_count)])

    # phase one: minimise the sum of artificials
    tableau.set_objective([Fraction(0)] * real_columns + [Fraction(1)] * row_count)
    tableau.optimise(total)
    if tableau.objective_value != 0:
        return LpResult(LpStatus.INFEASIBLE)

    # drive remaining (zero-valued) artificials out, dropping redundant rows
    r = 0
    while r < len(tableau.rows):
        if tableau.basis[r] >= real_columns:
            row = tableau.rows[r]
            c = next((j for j in range(real_columns) if row[j] != 0), None)
            if c is None:
                del tableau.rows[r]
                del tableau.basis[r]
                continue
            tableau.pivot(r, c)
        r += 1
    for row in tableau.rows:
        del row[real_columns:total]

    # phase two
    costs = [sign * lp.objective[j] for j, sign in columns] + [Fraction(0)] * len(slack_rows)
    tableau.set_objective(costs)
    if not tableau.optimise(real_columns):
        return LpResult(LpStatus.UNBOUNDED)

    values = [Fraction(0)] * real_columns
    for row, basic in zip(tableau.rows, tableau.basis):
        values[basic] = row[-1]
    point = [Fraction(0)] * lp.width
    for k, (j, sign) in enumerate(columns):
        point[j] += sign * values[k]
    value = sum((c * x for c, x in zip(lp.objective, point)), Fraction(0))
    return LpResult(LpStatus.OPTIMAL, tuple(point), value)
