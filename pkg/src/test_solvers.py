#!/usr/bin/env python3
"""
Tests for the positional and stationary equilibrium searches

Stationary searches run against tiny shell scripts standing in for the
external solver; the z3-backed cases run only when z3 is on PATH.
"""

import shutil
import stat
from fractions import Fraction

import pytest

from src.analysis import (
    PositionalProfile,
    StationaryProfile,
    Thresholds,
    best_response_value,
    value_vector,
    verify_ne,
)
from src.config.config_container import SOLVER_CMD_ENV, SolverConfig
from src.reductions.examples import example_game
from src.reductions.sat import CnfFormula, gen_sat_game, sat_thresholds
from src.solvers import (
    FormulaError,
    SearchVerdict,
    SolverBridge,
    SolverError,
    SolverUnavailable,
    SupportError,
    build_statne_formula,
    count_supports,
    emit_formulas,
    enumerate_supports,
    parse_model,
    profile_assignment,
    reach_sets,
    solve_posne,
    solve_statne,
)
from src.solvers.formula import alpha_name, r_name, z_name
from src.solvers.posne import count_positional_profiles
from src.solvers.supports import check_support, forced_edges
from src.ssmg import GameBuilder

HALF = Fraction(1, 2)
needs_z3 = pytest.mark.skipif(shutil.which("z3") is None, reason="z3 not on PATH")

ONE_VERTEX_SMT = """\
(set-option :produce-models true)
(set-logic QF_NRA)
(declare-fun alpha_t_t () Real)
(declare-fun z_0_t () Real)
(declare-fun r_0_t () Real)
(assert (<= 0 alpha_t_t))
(assert (= alpha_t_t 1))
(assert (= alpha_t_t 1))
(assert (< 0 alpha_t_t))
(assert (= z_0_t 1))
(assert (<= 0 r_0_t))
(assert (= r_0_t 1))
(assert (= r_0_t (* alpha_t_t r_0_t)))
(assert (<= r_0_t z_0_t))
(assert (<= 1 z_0_t))
(assert (<= z_0_t 1))
(check-sat)
(get-model)
"""

PROP2_MIX_MODEL = """\
sat
(
  (define-fun alpha_v0_v1 () Real 1.0)
  (define-fun alpha_v0_v0.exit () Real 0.0)
  (define-fun alpha_v1_v2 () Real 1.0)
  (define-fun alpha_v1_v1.exit () Real 0.0)
  (define-fun alpha_v2_v2.left () Real (/ 1.0 2.0))
  (define-fun alpha_v2_v2.right () Real (/ 1.0 2.0))
)
"""


@pytest.fixture(autouse=True)
def no_solver_env(monkeypatch):
    monkeypatch.delenv(SOLVER_CMD_ENV, raising=False)


@pytest.fixture
def prop1():
    return example_game("prop1")


@pytest.fixture
def prop2():
    return example_game("prop2")


def fake_solver(tmp_path, output: str) -> str:
    """Executable that ignores its formula argument and prints `output`."""
    answer = tmp_path / "answer.txt"
    answer.write_text(output, encoding='utf-8')
    script = tmp_path / "fake-solver"
    script.write_text(f"#!/bin/sh\ncat '{answer}'\n", encoding='utf-8')
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    return str(script)


def one_vertex_game():
    builder = GameBuilder(["0"])
    builder.add_terminal("t", winners=["0"])
    return builder.build_initialized("t")


# ---------------------------------------------------------------------------
# Supports
# ---------------------------------------------------------------------------

def test_two_successors_give_three_supports():
    builder = GameBuilder(["0"])
    builder.add_vertex("v", owner="0")
    builder.add_terminal("a", winners=["0"])
    builder.add_terminal("b")
    builder.add_edge("v", "a")
    builder.add_edge("v", "b")
    game = builder.build()
    supports = list(enumerate_supports(game))
    assert count_supports(game) == len(supports) == 3
    assert [sorted(w for v, w in s if v == "v") for s in supports] == [["a"], ["b"], ["a", "b"]]


def test_game_without_owned_vertices_has_one_support():
    game = one_vertex_game().game
    assert count_supports(game) == 1
    assert list(enumerate_supports(game)) == [frozenset(forced_edges(game))]


def test_support_count_matches_enumeration(prop1):
    game = prop1.ig.game
    supports = list(enumerate_supports(game))
    assert len(supports) == count_supports(game) == 3 ** 4
    assert len(set(supports)) == len(supports)


def test_support_must_cover_stochastic_edges_and_owned_vertices(prop2):
    game = prop2.ig.game
    first = next(enumerate_supports(game))
    with pytest.raises(SupportError):
        check_support(game, first - {("v2", "v2.left")})
    with pytest.raises(SupportError):
        check_support(game, first | {("v2", "v0")})
    stochastic = next(iter(forced_edges(game)))
    with pytest.raises(SupportError):
        check_support(game, first - {stochastic})


def test_reach_sets_follow_support_edges(prop2):
    game = prop2.ig.game
    left_only = next(enumerate_supports(game))
    reach = reach_sets(game, left_only)
    assert {"v0", "v1", "v2"} <= reach[0]
    assert "v2" in reach[1]
    # with every vertex on its first edge, player 2 wins nowhere along the spine
    assert "v2" not in reach[2]
    assert "v1" not in reach[2]
    assert "v1.exit" in reach[2]


# ---------------------------------------------------------------------------
# Positional search
# ---------------------------------------------------------------------------

def test_unconstrained_positional_search_finds_equilibrium(prop2):
    result = solve_posne(prop2.ig)
    assert result.verdict is SearchVerdict.FOUND
    assert verify_ne(prop2.ig, result.profile).is_equilibrium
    assert result.payoff == verify_ne(prop2.ig, result.profile).payoff


def test_no_pure_equilibrium_pays_player_zero(prop2):
    result = solve_posne(prop2.ig, Thresholds.of((Fraction(1, 100), 0, 0), (1, 1, 1)))
    assert result.verdict is SearchVerdict.NOT_FOUND


def test_no_positional_equilibrium_pays_player_zero_in_prop1(prop1):
    result = solve_posne(prop1.ig, Thresholds.of((Fraction(1, 100), 0, 0), (1, 1, 1)))
    assert result.verdict is SearchVerdict.NOT_FOUND


def test_positional_cap(prop1):
    assert count_positional_profiles(prop1.ig) == 16
    result = solve_posne(prop1.ig, cap=15)
    assert result.verdict is SearchVerdict.CAP_EXCEEDED
    assert "16" in result.detail


def test_unreachable_thresholds_stop_at_the_root():
    builder = GameBuilder(["0"])
    builder.add_vertex("s")
    builder.add_terminal("a", winners=["0"])
    builder.add_terminal("b")
    builder.add_edge("s", "a", HALF)
    builder.add_edge("s", "b", HALF)
    result = solve_posne(builder.build_initialized("s"), Thresholds.of((1,), (1,)))
    assert result.verdict is SearchVerdict.NOT_FOUND
    assert result.detail == "thresholds unreachable"
    assert result.explored == 0


def test_satisfiable_formula_yields_positional_equilibrium():
    ig = gen_sat_game(CnfFormula.of(1, [[1]]))
    result = solve_posne(ig, sat_thresholds())
    assert result.verdict is SearchVerdict.FOUND
    assert result.payoff == (1, HALF)


def test_unsatisfiable_formula_has_no_positional_equilibrium():
    ig = gen_sat_game(CnfFormula.of(1, [[1], [-1]]))
    assert solve_posne(ig, sat_thresholds()).verdict is SearchVerdict.NOT_FOUND


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

def test_one_vertex_formula_text():
    ig = one_vertex_game()
    formula = build_statne_formula(ig, Thresholds.of((1,), (1,)), frozenset({("t", "t")}))
    assert formula.to_smtlib() == ONE_VERTEX_SMT


def test_variables_are_declared_once_and_all_used(prop2):
    ig = prop2.ig
    support = next(enumerate_supports(ig.game))
    formula = build_statne_formula(ig, Thresholds.unconstrained(3), support)
    assert len(set(formula.variables)) == len(formula.variables)
    assert formula.used_variables() <= set(formula.variables)
    edges = sum(len(ig.game.successors(v)) for v in ig.game.vertices)
    assert len(formula.variables) == edges + 2 * 3 * len(ig.game.vertices)


def test_invalid_support_is_a_formula_error(prop2):
    with pytest.raises(FormulaError):
        build_statne_formula(prop2.ig, Thresholds.unconstrained(3), frozenset())


def _assignment(ig, profile: StationaryProfile):
    """alpha, z and r values of a profile, computed with the exact analysis."""
    values = profile_assignment(ig, profile.choices)
    for i in range(ig.game.num_players):
        for v, x in value_vector(ig.game, profile, i).items():
            values[z_name(i, v)] = x
        for v, x in best_response_value(ig, profile, i).items():
            values[r_name(i, v)] = x
    return values


def test_formula_holds_exactly_on_the_matching_support(prop2):
    ig = prop2.ig
    mix = prop2.profiles["mix"]
    values = _assignment(ig, mix)
    thresholds = Thresholds.player0_wins(3)
    matching = [s for s in enumerate_supports(ig.game) if s == mix.support() | forced_edges(ig.game)]
    assert len(matching) == 1
    for support in enumerate_supports(ig.game):
        formula = build_statne_formula(ig, thresholds, support)
        assert formula.holds(values, groups=["phi"]) == (support == matching[0])
    assert build_statne_formula(ig, thresholds, matching[0]).holds(values)


def test_equilibrium_group_fails_for_a_non_equilibrium(prop2):
    ig = prop2.ig
    pure = PositionalProfile({"v0": "v1", "v1": "v2", "v2": "v2.left"}).to_stationary()
    values = _assignment(ig, pure)
    support = pure.support() | forced_edges(ig.game)
    formula = build_statne_formula(ig, Thresholds.unconstrained(3), support)
    assert formula.holds(values, groups=["phi", "eta", "theta"])
    assert not formula.holds(values, groups=["psi"])


def test_profile_assignment_reads_game_probabilities(prop1):
    ig = prop1.ig
    values = profile_assignment(ig, {"v0": {"v1": 1}})
    assert values[alpha_name("v4", "v2")] == HALF
    assert values[alpha_name("v0", "v1")] == 1
    assert values[alpha_name("v0", "v0.exit")] == 0


# ---------------------------------------------------------------------------
# Solver bridge
# ---------------------------------------------------------------------------

def test_model_with_rationals_and_negatives():
    values, irrational = parse_model("""
        ((define-fun a () Real (/ 1 3))
         (define-fun b () Real (- 2.5))
         (define-fun |c d| () Real 0.0))
    """)
    assert values == {"a": Fraction(1, 3), "b": Fraction(-5, 2), "c d": Fraction(0)}
    assert irrational == set()


def test_algebraic_values_are_reported_separately():
    values, irrational = parse_model(
        "(model (define-fun x () Real (root-obj (+ (^ x 2) (- 2)) 2)) (define-fun y () Real 1))"
    )
    assert values == {"y": Fraction(1)}
    assert irrational == {"x"}


def test_approximate_values_are_not_trusted():
    _, irrational = parse_model("((define-fun x () Real 1.4142135623?))")
    assert irrational == {"x"}


def test_unbalanced_output_is_a_solver_error():
    with pytest.raises(SolverError):
        parse_model("((define-fun x () Real 1)")


def test_command_template_places_the_file(tmp_path):
    path = tmp_path / "f.smt2"
    assert SolverBridge("z3 -smt2 {file}").argv(path) == ["z3", "-smt2", str(path)]
    assert SolverBridge("cvc5 --lang smt2").argv(path) == ["cvc5", "--lang", "smt2", str(path)]
    with pytest.raises(SolverUnavailable):
        SolverBridge("").argv(path)


def test_unknown_answer_is_an_error(tmp_path):
    bridge = SolverBridge(fake_solver(tmp_path, "unknown\n"))
    formula = tmp_path / "f.smt2"
    formula.write_text(ONE_VERTEX_SMT, encoding='utf-8')
    with pytest.raises(SolverError):
        bridge.check(formula)


# ---------------------------------------------------------------------------
# Stationary search
# ---------------------------------------------------------------------------

def test_missing_solver_is_reported(prop2):
    result = solve_statne(prop2.ig, Thresholds.player0_wins(3),
                          SolverConfig(command="ssmg-no-such-solver"))
    assert result.verdict is SearchVerdict.SOLVER_UNAVAILABLE


def test_environment_command_is_used(prop2, tmp_path, monkeypatch):
    monkeypatch.setenv(SOLVER_CMD_ENV, fake_solver(tmp_path, "unsat\n"))
    result = solve_statne(prop2.ig, Thresholds.player0_wins(3), SolverConfig(command="ssmg-no-such-solver"))
    assert result.verdict is SearchVerdict.NOT_FOUND
    assert result.explored == 27


def test_unsat_everywhere_is_not_found(prop2, tmp_path):
    solver = SolverConfig(command=fake_solver(tmp_path, "unsat\n"), jobs=4)
    result = solve_statne(prop2.ig, Thresholds.player0_wins(3), solver)
    assert result.verdict is SearchVerdict.NOT_FOUND


def test_rational_witness_is_verified(prop2, tmp_path):
    solver = SolverConfig(command=fake_solver(tmp_path, PROP2_MIX_MODEL))
    result = solve_statne(prop2.ig, Thresholds.player0_wins(3), solver)
    assert result.verdict is SearchVerdict.FOUND
    assert result.witness.support() == prop2.profiles["mix"].support()
    assert result.witness_verified is True
    assert result.payoff == (1, HALF, HALF)
    assert result.explored == 1


def test_wrong_witness_is_flagged(prop2, tmp_path):
    model = PROP2_MIX_MODEL.replace("(/ 1.0 2.0))\n  (define-fun alpha_v2_v2.right () Real (/ 1.0 2.0))",
                                    "1.0)\n  (define-fun alpha_v2_v2.right () Real 0.0)")
    solver = SolverConfig(command=fake_solver(tmp_path, model))
    result = solve_statne(prop2.ig, Thresholds.player0_wins(3), solver)
    assert result.verdict is SearchVerdict.FOUND
    assert result.witness_verified is False
    assert "failed" in result.detail


def test_irrational_witness_skips_verification(prop2, tmp_path):
    model = PROP2_MIX_MODEL.replace("(/ 1.0 2.0))\n)", "(root-obj (+ (^ x 2) (- 2)) 1))\n)")
    solver = SolverConfig(command=fake_solver(tmp_path, model))
    result = solve_statne(prop2.ig, Thresholds.player0_wins(3), solver)
    assert result.verdict is SearchVerdict.FOUND
    assert result.witness is None
    assert result.witness_verified is None


def test_statne_cap(prop1):
    result = solve_statne(prop1.ig, solver=SolverConfig(command="ssmg-no-such-solver"), cap=80)
    assert result.verdict is SearchVerdict.CAP_EXCEEDED


def test_emitted_files_follow_enumeration(prop2, tmp_path):
    paths = emit_formulas(prop2.ig, Thresholds.player0_wins(3), tmp_path / "out")
    assert [p.name for p in paths[:2]] == ["support_00000.smt2", "support_00001.smt2"]
    assert len(paths) == 27
    assert paths[0].read_text(encoding='utf-8').startswith("(set-option :produce-models true)\n")


def test_emit_dir_keeps_formulas(prop2, tmp_path):
    out = tmp_path / "kept"
    solver = SolverConfig(command=fake_solver(tmp_path, "unsat\n"), emit_dir=str(out))
    solve_statne(prop2.ig, Thresholds.player0_wins(3), solver)
    assert len(list(out.glob("support_*.smt2"))) == 27


@needs_z3
def test_z3_finds_the_mixed_equilibrium(prop2):
    result = solve_statne(prop2.ig, Thresholds.player0_wins(3), SolverConfig(command="z3 -smt2 {file}"))
    assert result.verdict is SearchVerdict.FOUND
    assert result.witness_verified in (True, None)


@needs_z3
def test_z3_refutes_stationary_win_in_prop1(prop1):
    result = solve_statne(prop1.ig, Thresholds.of((Fraction(1, 100), 0, 0), (1, 1, 1)),
                          SolverConfig(command="z3 -smt2 {file}"))
    assert result.verdict is SearchVerdict.NOT_FOUND
