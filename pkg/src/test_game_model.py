#!/usr/bin/env python3
"""
Tests for the game model: validation, desugaring and the game file format
"""

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.analysis import StationaryProfile, stationary_payoff
from src.core import format_rational, parse_rational
from src.reductions.examples import example_game
from src.ssmg import (
    DesugarError,
    Game,
    GameBuilder,
    GameFormatError,
    GameModelError,
    GameValidationError,
    InitializedGame,
    Transition,
    ViolationKind,
    desugar,
    desugar_initialized,
    game_from_dict,
    game_to_dict,
    load,
    random_game,
    save,
    validate,
)


def kinds(violations):
    return [v.kind for v in violations]


def test_example_games_validate():
    for name in ("prop1", "prop2"):
        assert validate(example_game(name).ig.game) == []


def test_probabilities_must_sum_to_one():
    builder = GameBuilder(["0"])
    builder.add_vertex("s")
    builder.add_terminal("a", winners=["0"])
    builder.add_terminal("b")
    builder.add_edge("s", "a", "1/2")
    builder.add_edge("s", "b", "1/3")
    assert kinds(validate(builder.build())) == [ViolationKind.PROB_SUM]


def test_winning_vertex_must_be_a_sink():
    game = Game(
        players=("0",),
        vertices=("t", "u"),
        owner={"t": 0, "u": 0},
        transitions=(Transition("t", "t"), Transition("t", "u"), Transition("u", "u")),
        win_sets={0: frozenset({"t"})},
    )
    assert kinds(validate(game)) == [ViolationKind.TERMINAL_NOT_SINK]


def test_owned_edge_with_probability_is_flagged():
    game = Game(("0",), ("v", "t"), {"v": 0}, (Transition("v", "t", Fraction(1)), Transition("t", "t", Fraction(1))), {})
    assert ViolationKind.PROB_LABEL in kinds(validate(game))


def test_unknown_vertex_and_empty_successors():
    game = Game(("0",), ("v",), {}, (Transition("v", "w", Fraction(1)),), {})
    found = kinds(validate(game))
    assert ViolationKind.UNKNOWN_VERTEX in found
    assert ViolationKind.EMPTY_SUCCESSORS in found


def test_transitions_are_grouped_by_source():
    builder = GameBuilder(["0"])
    builder.add_vertex("v", owner="0")
    builder.add_terminal("t")
    builder.add_edge("v", "t")
    game = builder.build()
    assert [t.source for t in game.transitions] == ["v", "t"]
    assert game.successors("v") == ("t",)
    assert game.is_terminal("t")
    assert not game.is_terminal("v")


def test_player_lookup_by_name_and_index():
    game = example_game("prop2").ig.game
    assert game.player_index("2") == 2
    assert game.player_index(1) == 1
    with pytest.raises(GameModelError):
        game.player_index("7")


def test_half_payoff_becomes_two_branch_lottery():
    builder = GameBuilder(["0", "1"])
    builder.add_payoff_terminal("t", {"0": "1/2", "1": 0})
    game = desugar(builder.build())
    assert game.vertices == ("t", "t.0", "t.1")
    assert game.row("t") == {"t.0": Fraction(1, 2), "t.1": Fraction(1, 2)}
    assert game.win_set(0) == frozenset({"t.0"})
    assert game.win_set(1) == frozenset()
    assert validate(game) == []


def test_all_ones_payoff_needs_no_lottery():
    builder = GameBuilder(["0", "1"])
    builder.add_payoff_terminal("t", {"0": 1, "1": 1})
    game = desugar(builder.build())
    assert game.vertices == ("t",)
    assert game.is_terminal("t")
    assert game.winners("t") == (0, 1)


def test_thirds_payoff_keeps_marginals():
    builder = GameBuilder(["0", "1"])
    builder.add_payoff_terminal("t", {"0": "1/3", "1": "2/3"})
    ig = desugar_initialized(builder.build_initialized("t"))
    assert len(ig.game.row("t")) == 3
    assert stationary_payoff(ig, StationaryProfile({})) == (Fraction(1, 3), Fraction(2, 3))


def test_payoff_outside_unit_interval_rejected():
    builder = GameBuilder(["0"])
    builder.add_payoff_terminal("t", {"0": "3/2"})
    with pytest.raises(DesugarError):
        desugar(builder.build())


def test_lottery_cap_enforced():
    builder = GameBuilder(["0"])
    builder.add_payoff_terminal("t", {"0": "1/1000"})
    with pytest.raises(DesugarError):
        desugar(builder.build(), max_branches=100)


def test_vector_payoff_games_must_be_desugared_before_analysis():
    builder = GameBuilder(["0"])
    builder.add_payoff_terminal("t", {"0": "1/2"})
    with pytest.raises(GameModelError):
        stationary_payoff(builder.build_initialized("t"), StationaryProfile({}))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.fractions(min_value=0, max_value=1, max_denominator=6), min_size=3, max_size=3),
    st.fractions(min_value=0, max_value=1, max_denominator=5),
)
def test_desugaring_preserves_payoffs(payoff, q):
    builder = GameBuilder(["0", "1", "2"])
    builder.add_vertex("v0")
    builder.add_payoff_terminal("pay", {str(i): x for i, x in enumerate(payoff)})
    builder.add_terminal("lose")
    builder.add_edge("v0", "pay", q)
    builder.add_edge("v0", "lose", 1 - q)
    ig = desugar_initialized(builder.build_initialized("v0"))
    assert validate(ig.game) == []
    assert stationary_payoff(ig, StationaryProfile({})) == tuple(q * x for x in payoff)


def test_save_then_load_is_identity(tmp_path):
    ig = example_game("prop1").ig
    path = tmp_path / "prop1.json"
    save(ig, path)
    again = load(path)
    assert game_to_dict(again) == game_to_dict(ig)
    assert again.game.transitions == ig.game.transitions


def test_vector_payoff_game_round_trips(tmp_path):
    builder = GameBuilder(["0", "1"])
    builder.add_vertex("v", owner="1")
    builder.add_payoff_terminal("t", {"0": "1/3"})
    builder.add_terminal("u", winners=["1"])
    builder.add_edge("v", "t")
    builder.add_edge("v", "u")
    ig = builder.build_initialized("v")
    save(ig, tmp_path / "g.json")
    data = json.loads((tmp_path / "g.json").read_text(encoding='utf-8'))
    assert data["vertices"][1]["terminal_payoff"] == {"0": "1/3"}
    assert game_to_dict(load(tmp_path / "g.json")) == game_to_dict(ig)


def _tiny(prob):
    return {
        "players": ["0"],
        "initial": "s",
        "vertices": [{"id": "s", "owner": None}, {"id": "a"}, {"id": "b"}],
        "edges": [{"from": "s", "to": "a", "prob": prob}, {"from": "s", "to": "b", "prob": prob}],
        "win_sets": {"0": ["a"]},
    }


def test_loaded_rationals_are_reduced():
    ig = game_from_dict(_tiny("2/4"))
    assert ig.game.prob("s", "a") == Fraction(1, 2)
    assert ig.game.is_terminal("a")


def test_zero_denominator_is_a_parse_error():
    with pytest.raises(GameFormatError):
        game_from_dict(_tiny("1/0"))


def test_invalid_game_reports_violations():
    with pytest.raises(GameValidationError) as info:
        game_from_dict(_tiny("1/3"))
    assert kinds(info.value.violations) == [ViolationKind.PROB_SUM]


def test_unchecked_load_keeps_invalid_game():
    ig = game_from_dict(_tiny("1/3"), check=False)
    assert kinds(validate(ig.game)) == [ViolationKind.PROB_SUM]


def test_broken_json_names_the_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"players": ["0"],\n "initial": }', encoding='utf-8')
    with pytest.raises(GameFormatError, match="line 2"):
        load(path)


def test_unknown_initial_vertex_rejected():
    data = _tiny("1/2")
    data["initial"] = "nowhere"
    with pytest.raises(GameFormatError):
        game_from_dict(data)


def test_initialized_game_checks_initial_vertex():
    with pytest.raises(GameModelError):
        InitializedGame(example_game("prop2").ig.game, "nowhere")


@pytest.mark.parametrize("text, value", [
    ("3", Fraction(3)),
    ("2/4", Fraction(1, 2)),
    ("-1/3", Fraction(-1, 3)),
    (" 7/7 ", Fraction(1)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", "0.5", "a/b", "", True])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(5, 32)) == "5/32"
    assert format_rational(Fraction(4, 2)) == "2"


@pytest.mark.parametrize("seed", range(25))
def test_random_games_are_valid(seed):
    ig = random_game(random.Random(seed))
    assert validate(ig.game) == []
    assert ig.initial == "v0"
    assert all(len(ig.game.successors(v)) <= 2 for v in ig.game.vertices)
