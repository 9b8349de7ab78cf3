#!/usr/bin/env python3
"""
Tests for the hardness gadgets, the example games and the exact checkers
"""

import math
import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from src.analysis import stationary_payoff, verify_ne
from src.reductions import (
    CounterCapExceeded,
    DomainError,
    Inc,
    InstanceError,
    Label,
    SqrtSumInstance,
    TwoCounterMachine,
    UnknownExample,
    bounded_payoff,
    example_game,
    gen_2cm_game,
    gen_sat_game,
    gen_sqrtsum_game,
    gp_max_payoff,
    intended_2cm_profile,
    parse_dimacs,
    parse_machine,
    parse_sqrtsum,
    sat_equilibrium_profile,
    sat_thresholds,
    satisfying_assignment,
    segment_probability,
    simulate,
    sqrtsum_threshold_check,
)
from src.reductions.sat import CnfFormula, cnf_corpus
from src.reductions.sqrtsum import gadget_game
from src.reductions.two_counter import (
    INIT,
    LABELS,
    STEP_VERTICES,
    TWO_COUNTER_PLAYERS,
    black_vertex,
    counter_gadget_masses,
    counter_vertex,
    counter_update_holds,
    grey_vertex,
    instruction_vertex,
    segment_probability_by_play,
)
from src.ssmg import validate

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

COUNTDOWN = """\
# count to two, then back to zero
inc 1 2
inc 1 3
test 1 4 3
halt
"""


# ---------------------------------------------------------------------------
# SAT
# ---------------------------------------------------------------------------

def test_dimacs_parsing():
    cnf = parse_dimacs("c two clauses\np cnf 2 2\n1 -2 0\n2 0\n")
    assert cnf == CnfFormula.of(2, [[1, -2], [2]])
    assert parse_dimacs(cnf.to_dimacs()) == cnf


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2 2\n1 2 0\n",
    "p cnf 2 1\n1 2\n",
    "p cnf 1 1\n3 0\n",
    "p cnf 1 1\nx 0\n",
])
def test_malformed_dimacs(text):
    with pytest.raises(InstanceError):
        parse_dimacs(text)


def test_sat_game_structure():
    ig = gen_sat_game(CnfFormula.of(1, [[1]]))
    game = ig.game
    assert ig.players == ("0", "1")
    assert ig.initial == "v0"
    assert validate(game) == []
    assert game.row("v0") == {"x1": QUARTER, "nx1": QUARTER, "phi": QUARTER, "v0.exit": QUARTER}
    assert game.row("phi") == {"c1": HALF, "phi.win": HALF}
    assert game.successors("c1") == ("x1",)


def test_satisfying_assignment_profile_pays_one_and_a_half():
    cnf = CnfFormula.of(2, [[1, 2], [-1]])
    assignment = satisfying_assignment(cnf)
    assert assignment == {1: False, 2: True}
    ig = gen_sat_game(cnf)
    profile = sat_equilibrium_profile(cnf, assignment)
    assert stationary_payoff(ig, profile) == (1, HALF)
    assert verify_ne(ig, profile, sat_thresholds()).accepted


def test_profile_needs_a_satisfying_assignment():
    cnf = CnfFormula.of(1, [[1]])
    with pytest.raises(InstanceError):
        sat_equilibrium_profile(cnf, {1: False})
    with pytest.raises(InstanceError):
        sat_equilibrium_profile(cnf, {})


def test_formula_without_clauses_rejected():
    with pytest.raises(InstanceError):
        gen_sat_game(CnfFormula.of(1, []))


def test_satisfiable_corpus_profiles_are_equilibria():
    rng = random.Random(7)
    corpus = cnf_corpus()
    for cnf in rng.sample(corpus, 200):
        assignment = satisfying_assignment(cnf)
        if assignment is None:
            assert not any(
                cnf.satisfied_by({i + 1: bool(mask >> i & 1) for i in range(cnf.variables)})
                for mask in range(2 ** cnf.variables)
            )
            continue
        ig = gen_sat_game(cnf)
        verdict = verify_ne(ig, sat_equilibrium_profile(cnf, assignment), sat_thresholds())
        assert verdict.accepted, cnf.to_dimacs()


# ---------------------------------------------------------------------------
# SqrtSum
# ---------------------------------------------------------------------------

def test_sqrtsum_game_probabilities():
    inst = parse_sqrtsum("1 1 ; 2")
    ig = gen_sqrtsum_game(inst)
    game = ig.game
    assert inst.p(0) == Fraction(7, 8)
    assert game.row("v1") == {"g1.s": Fraction(15, 32), "g2.s": Fraction(15, 32), "v1.exit": Fraction(1, 16)}
    assert game.row("g1.a") == {"g1.s1": Fraction(7, 8), "g1.a.exit": Fraction(1, 8)}
    assert game.successors("v0") == ("v1", "v0.exit")
    assert validate(game) == []


def test_gadget_rejects_p_outside_domain():
    with pytest.raises(DomainError):
        gadget_game(Fraction(1, 3))
    assert validate(gadget_game(Fraction(3, 4)).game) == []


@pytest.mark.parametrize("text", ["", "1 x ; 2", "1 1 ; 5", "0 1 ; 0", "1 2 3"])
def test_malformed_sqrtsum_instances(text):
    with pytest.raises(InstanceError):
        parse_sqrtsum(text)


def test_perfect_squares_meeting_k():
    check = sqrtsum_threshold_check(SqrtSumInstance((1, 1), 2))
    assert check.verdict
    assert check.equality
    assert check.lhs_lower == check.lhs_upper == Fraction(5, 32)
    assert check.rhs == Fraction(5, 32)


def test_irrational_sum_below_k():
    check = sqrtsum_threshold_check(SqrtSumInstance((2, 2), 3))
    assert not check.verdict
    assert not check.equality
    assert check.lhs_upper < check.rhs


def test_single_square_equality():
    check = sqrtsum_threshold_check(SqrtSumInstance((4,), 2))
    assert check.verdict and check.equality


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=50), min_size=1, max_size=4).flatmap(
    lambda d: st.tuples(st.just(tuple(d)), st.integers(min_value=0, max_value=sum(d)))
))
def test_threshold_check_matches_integer_arithmetic(instance):
    d, k = instance
    check = sqrtsum_threshold_check(SqrtSumInstance(d, k))
    assert check.lhs_lower <= check.lhs_upper
    if all(math.isqrt(x) ** 2 == x for x in d):
        assert check.verdict == (sum(math.isqrt(x) for x in d) >= k)
    elif abs(sum(math.sqrt(x) for x in d) - k) > 1e-9:
        assert check.verdict == (sum(math.sqrt(x) for x in d) >= k)
    if check.verdict:
        assert check.lhs_lower >= check.rhs
    else:
        assert check.lhs_upper < check.rhs


def test_gp_maximum_exact_cases():
    best = gp_max_payoff(Fraction(7, 8))
    assert best.is_exact
    assert best.exact_value == Fraction(1, 6)
    assert best.exact_x == Fraction(4, 7)

    half = gp_max_payoff(HALF)
    assert half.exact_value == HALF
    assert half.exact_x == 0


@pytest.mark.parametrize("p", [Fraction(1), Fraction(2, 5), Fraction(3, 2)])
def test_gp_domain(p):
    with pytest.raises(DomainError):
        gp_max_payoff(p)


@pytest.mark.parametrize("k", range(1, 51))
def test_gp_maximum_matches_root_finding(k):
    p = Fraction(1, 2) + Fraction(49, 100) * Fraction(k, 50)
    pf = float(p)
    x = brentq(lambda t: pf * pf * t * t - 2 * pf * t + 2 * pf - 1, 0.0, 1.0, xtol=1e-14)
    oracle = (1 - pf) / (1 - x * x * pf * pf)
    best = gp_max_payoff(p, precision=30)
    assert abs(float(best.value) - oracle) < 1e-9
    assert abs(float(best.x) - x) < 1e-9


def test_gp_precision_controls_digits():
    best = gp_max_payoff(Fraction(3, 4), precision=40)
    assert not best.is_exact
    assert len(str(best.value).lstrip("0.")) == 40


# ---------------------------------------------------------------------------
# Two-counter machines
# ---------------------------------------------------------------------------

def test_machine_parsing():
    machine = parse_machine(COUNTDOWN)
    assert machine.size == 4
    assert machine.instruction(1) == Inc(1, 2)
    assert parse_machine(machine.to_text()) == machine


@pytest.mark.parametrize("text", ["jump 1\n", "inc 1\n", "inc 3 1\n", "inc 1 9\n", "test 1 1 1\n", "inc a 1\n", ""])
def test_malformed_machines(text):
    with pytest.raises(InstanceError):
        parse_machine(text)


def test_simulation_of_countdown():
    run = simulate(parse_machine(COUNTDOWN), 100)
    assert run.halted
    assert [c.counters for c in run.configurations] == [(0, 0), (1, 0), (2, 0), (1, 0), (0, 0), (0, 0)]
    assert [str(label) for label in run.labels] == ["init", "inc1", "inc1", "dec1", "dec1", "zero1"]

    prefix = simulate(parse_machine(COUNTDOWN), 3)
    assert len(prefix) == 3
    assert not prefix.halted


def test_counter_cap():
    with pytest.raises(CounterCapExceeded):
        simulate(TwoCounterMachine((Inc(1, 1),)), 100, counter_cap=5)


@pytest.mark.parametrize("text, label", [("init", INIT), ("inc(1)", Label("inc", 1)), ("zero2", Label("zero", 2))])
def test_label_parsing(text, label):
    assert Label.parse(text) == label


def test_unknown_label():
    with pytest.raises(InstanceError):
        Label.parse("mul1")


def test_machine_game_structure():
    ig = gen_2cm_game(parse_machine("inc 1 2\nhalt\n"))
    game = ig.game
    assert ig.players == TWO_COUNTER_PLAYERS
    assert ig.initial == black_vertex(0, 1, INIT)
    assert validate(game) == []
    for t in (0, 1):
        for j in (1, 2):
            q0 = counter_vertex(t, j, INIT)
            assert game.successors(q0) == (f"{q0}.s1",)
            assert grey_vertex(t, j, INIT) in game.index
        zero = counter_vertex(t, 1, Label("zero", 1))
        assert grey_vertex(t, 1, Label("zero", 1)) not in game.successors(zero)
        inc = counter_vertex(t, 1, Label("inc", 1))
        assert grey_vertex(t, 1, Label("inc", 1)) in game.successors(inc)
        halt = instruction_vertex(t, 2, Label("inc", 1))
        assert game.successors(halt) == (f"{halt}.halt",)
        assert game.is_terminal(f"{halt}.halt")
        assert game.winners(f"{halt}.halt") == ()


def test_intended_profile_follows_the_run():
    machine = parse_machine(COUNTDOWN)
    profile = intended_2cm_profile(machine, 10)
    assert profile.flags == ("halt-reached",)
    player0 = profile.machines[0]
    # third configuration (3, 2, 0) was reached by inc1 and is left by dec1
    inc1 = Label("inc", 1)
    q0 = counter_vertex(0, 1, inc1)
    assert player0.choice((3, 0), q0) == grey_vertex(0, 1, inc1)
    assert player0.choice((3, 1), q0) == grey_vertex(0, 1, inc1)
    assert player0.choice((3, 2), q0) == f"{q0}.s1"
    assert player0.update((3, 1), grey_vertex(0, 1, inc1)) == (3, 2)
    assert player0.choice((3, 0), instruction_vertex(0, 3, inc1)) == black_vertex(1, 3, Label("dec", 1))


def test_truncated_profile_is_flagged():
    profile = intended_2cm_profile(TwoCounterMachine((Inc(1, 1),)), 5)
    assert profile.flags == ("horizon-truncated",)
    with pytest.raises(InstanceError):
        intended_2cm_profile(TwoCounterMachine((Inc(1, 1),)), 0)


def test_segment_examples():
    inc1 = Label("inc", 1)
    assert segment_probability(inc1, 0, 1) == Fraction(7, 32) + Fraction(1, 32)
    assert segment_probability(inc1, 3, 4) == QUARTER
    assert segment_probability(inc1, 2, 2) != QUARTER
    assert segment_probability(Label("zero", 1), 0, 0) == QUARTER
    assert segment_probability(Label("zero", 1), 1, 0) != QUARTER
    with pytest.raises(InstanceError):
        segment_probability(inc1, -1, 0)


@pytest.mark.parametrize("label", [INIT, Label("zero", 1)], ids=str)
def test_gadget_without_grey_edge_cannot_loop(label):
    assert not counter_update_holds(label, 0, 7)
    with pytest.raises(InstanceError):
        segment_probability(label, 0, 7)


def test_inc_segment_is_the_binary_sum():
    inc1 = Label("inc", 1)
    for c in range(8):
        for c_next in range(8):
            expected = sum(Fraction(1, 2 ** k) for k in range(3, c + 6)) + Fraction(1, 2 ** (c_next + 4))
            assert segment_probability(inc1, c, c_next) == expected


@pytest.mark.parametrize("counter", (1, 2))
def test_segment_is_a_quarter_exactly_when_the_update_rule_holds(counter):
    started = time.perf_counter()
    for label in LABELS:
        for c in range(21):
            for c_next in range(21):
                holds = counter_update_holds(label, c, c_next, counter)
                if c_next > 0 and not label.loops_on(counter):
                    assert not holds, (label, c, c_next)
                    with pytest.raises(InstanceError):
                        segment_probability(label, c, c_next, counter)
                    continue
                p = segment_probability(label, c, c_next, counter)
                assert (p == QUARTER) == holds, (str(label), c, c_next)
    assert time.perf_counter() - started < 5


@pytest.mark.parametrize("label", LABELS, ids=str)
def test_segment_closed_form_matches_the_gadget_game(label):
    for c in range(3):
        for c_next in range(3 if label.loops_on(1) else 1):
            assert segment_probability(label, c, c_next) == segment_probability_by_play(label, c, c_next)


def test_gadget_masses_sum_to_one():
    for loops in range(6):
        masses = counter_gadget_masses(loops)
        assert sum(masses.values()) == 1
        assert masses["s1.exit"] == Fraction(1, 2 ** (loops + 1))


# ---------------------------------------------------------------------------
# Bounded payoff
# ---------------------------------------------------------------------------

def test_zero_horizon_knows_nothing():
    machine = parse_machine("inc 1 2\nhalt\n")
    ig = gen_2cm_game(machine)
    bounds = bounded_payoff(ig, intended_2cm_profile(machine, 5), 0)
    assert all((b.lower, b.upper) == (0, 1) for b in bounds)


def test_halting_machine_is_settled_exactly():
    machine = parse_machine("inc 1 2\nhalt\n")
    ig = gen_2cm_game(machine)
    bounds = bounded_payoff(ig, intended_2cm_profile(machine, 5), 200)
    assert all(b.width == 0 for b in bounds)
    # half the mass ends in a counter gadget at each of two steps, the rest halts
    assert bounds[0].lower == Fraction(3, 4)


def test_intervals_shrink_with_the_horizon():
    machine = TwoCounterMachine((Inc(1, 1),))
    ig = gen_2cm_game(machine)
    profile = intended_2cm_profile(machine, 25)
    previous = None
    for horizon in (0, 30, 60, 120):
        bounds = bounded_payoff(ig, profile, horizon)
        if previous is not None:
            for old, new in zip(previous, bounds):
                assert old.lower <= new.lower <= new.upper <= old.upper
        previous = bounds
    assert previous[0].lower >= 1 - Fraction(1, 2 ** 10)


def test_forty_machine_steps_bracket_the_infinite_run():
    machine = TwoCounterMachine((Inc(1, 1),))
    ig = gen_2cm_game(machine)
    bounds = bounded_payoff(ig, intended_2cm_profile(machine, 45), 40 * STEP_VERTICES)
    assert bounds[0].lower >= 1 - Fraction(1, 2 ** 10)
    assert bounds[0].upper == 1


# ---------------------------------------------------------------------------
# Examples
# ---------------------------------------------------------------------------

def test_prop3_lets_player_one_leave_first():
    example = example_game("prop3", profile_horizon=5)
    game = example.ig.game
    assert example.ig.initial == "v1"
    assert game.successors("v1") == (black_vertex(0, 1, INIT), "v1.exit")
    assert game.winners("v1.exit") == (game.player_index("1"),)
    assert validate(game) == []
    assert "intended" in example.profiles


def test_unknown_example():
    with pytest.raises(UnknownExample):
        example_game("prop9")
