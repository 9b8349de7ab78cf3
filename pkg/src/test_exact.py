#!/usr/bin/env python3
"""
Tests for the exact linear algebra and simplex kernels

The simplex is cross-checked against scipy's floating-point linprog on
random bounded programmes, then re-verified exactly by substitution.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from src.exact import (
    LinearProgram,
    LinearProgramError,
    LinearSystem,
    LpStatus,
    Relation,
    SingularSystem,
    lp_min,
    solve_system,
)


def test_identity_returns_rhs():
    system = LinearSystem.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]], ["1/2", 3, "-2/7"])
    assert solve_system(system) == [Fraction(1, 2), Fraction(3), Fraction(-2, 7)]


def test_geometric_cycle_has_value_one():
    # z = 1/2 + 1/2 z
    system = LinearSystem.of([[1 - Fraction(1, 2)]], [Fraction(1, 2)])
    assert solve_system(system) == [Fraction(1)]


def test_rank_deficient_system_is_singular():
    with pytest.raises(SingularSystem):
        solve_system(LinearSystem.of([[1, 2], [2, 4]], [1, 2]))


def test_non_square_system_is_singular():
    with pytest.raises(SingularSystem):
        solve_system(LinearSystem.of([[1, 2]], [1]))


def test_ragged_matrix_rejected():
    with pytest.raises(ValueError):
        LinearSystem.of([[1, 2], [3]], [1, 2])


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.tuples(
        st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n),
        st.lists(st.integers(-9, 9), min_size=n, max_size=n),
    )
))
def test_solution_substitutes_back_exactly(data):
    matrix, rhs = data
    # diagonal dominance keeps the matrix nonsingular
    for k, row in enumerate(matrix):
        row[k] = sum(abs(a) for a in row) + 1
    x = solve_system(LinearSystem.of(matrix, rhs))
    for row, b in zip(matrix, rhs):
        assert sum(Fraction(a) * xi for a, xi in zip(row, x)) == b


def test_lower_bound_is_optimal():
    result = lp_min(LinearProgram.build([1], [([1], Relation.GE, 3)]))
    assert result.status is LpStatus.OPTIMAL
    assert result.point == (Fraction(3),)
    assert result.value == 3


def test_contradictory_bounds_are_infeasible():
    result = lp_min(LinearProgram.build([1], [([1], Relation.LE, -1)]))
    assert result.status is LpStatus.INFEASIBLE
    assert not result.is_optimal


def test_unbounded_direction_detected():
    result = lp_min(LinearProgram.build([-1, 0], [([1, -1], Relation.LE, 1)]))
    assert result.status is LpStatus.UNBOUNDED


def test_free_variable_can_go_negative():
    lp = LinearProgram.build([1], [([1], Relation.GE, -5)], nonneg=[])
    result = lp_min(lp)
    assert result.point == (Fraction(-5),)


def test_chain_reachability_programme():
    # v0 -(1/2)-> win, v0 -(1/2)-> sink; minimise z_v0 + z_win + z_sink
    lp = LinearProgram.build(
        [1, 1, 1],
        [
            ([0, 1, 0], Relation.EQ, 1),
            ([0, 0, 1], Relation.EQ, 0),
            ([1, -Fraction(1, 2), -Fraction(1, 2)], Relation.EQ, 0),
        ],
    )
    result = lp_min(lp)
    assert result.is_optimal
    assert result.point[0] == Fraction(1, 2)


def test_redundant_equalities_are_dropped():
    lp = LinearProgram.build(
        [1, 1],
        [([1, 1], Relation.EQ, 2), ([2, 2], Relation.EQ, 4), ([1, 0], Relation.GE, "1/2")],
    )
    result = lp_min(lp)
    assert result.is_optimal
    assert result.value == 2
    assert lp.is_feasible_point(result.point)


def test_dimension_mismatch_rejected():
    with pytest.raises(LinearProgramError):
        LinearProgram.build([1, 1], [([1], Relation.LE, 1)])


def test_result_is_deterministic():
    lp = LinearProgram.build([-1, -1], [([1, 1], Relation.LE, 1)])
    assert lp_min(lp) == lp_min(lp)


@settings(max_examples=80, deadline=None)
@given(
    st.integers(min_value=1, max_value=4).flatmap(lambda n: st.tuples(
        st.lists(st.integers(-5, 5), min_size=n, max_size=n),
        st.lists(
            st.tuples(st.lists(st.integers(-4, 4), min_size=n, max_size=n), st.integers(0, 12)),
            min_size=1, max_size=4,
        ),
    ))
)
def test_simplex_matches_floating_point_oracle(data):
    objective, rows = data
    n = len(objective)
    # box the feasible region so every programme is bounded; x = 0 is feasible
    constraints = [(coefficients, Relation.LE, bound) for coefficients, bound in rows]
    constraints += [([1 if j == k else 0 for j in range(n)], Relation.LE, 10) for k in range(n)]
    lp = LinearProgram.build(objective, constraints)
    result = lp_min(lp)
    assert result.is_optimal
    assert lp.is_feasible_point(result.point)

    oracle = linprog(
        c=np.array(objective, dtype=float),
        A_ub=np.array([c for c, _, _ in constraints], dtype=float),
        b_ub=np.array([b for _, _, b in constraints], dtype=float),
        bounds=[(0, None)] * n,
        method="highs",
    )
    assert oracle.status == 0
    assert abs(float(result.value) - oracle.fun) < 1e-6
