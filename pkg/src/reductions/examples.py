#!/usr/bin/env python3
"""
Built-in Example Games

prop1: three players; a two-memory-state equilibrium lets player 0 win
       almost surely, no stationary equilibrium gives her positive payoff.
prop2: three players; the half/half stationary profile lets player 0 win
       almost surely, no pure equilibrium gives her positive payoff.
prop3: the game of the machine "inc 1 1" with a new initial vertex v1 where
       player 1 may leave; player 1 also wins wherever player 0 wins.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict

from src.analysis.profiles import (
    FiniteStateProfile,
    MemoryMachine,
    Profile,
    StationaryProfile,
)
from src.core import SsmgError
from src.reductions.two_counter import (
    INIT,
    Inc,
    TwoCounterMachine,
    black_vertex,
    intended_2cm_profile,
    two_counter_builder,
)
from src.ssmg.desugar import desugar_initialized
from src.ssmg.game import GameBuilder, InitializedGame


EXAMPLE_NAMES = ("prop1", "prop2", "prop3")


class UnknownExample(SsmgError):
    """Raised for example names other than prop1, prop2 and prop3."""
    pass


@dataclass(frozen=True)
class ExampleGame:
    """An example game with its documented profiles, keyed by a short name."""
    name: str
    ig: InitializedGame
    profiles: Dict[str, Profile] = field(default_factory=dict)


def _prop1() -> ExampleGame:
    half = Fraction(1, 2)
    builder = GameBuilder(["0", "1", "2"])
    builder.add_vertex("v0", owner="1")
    builder.add_vertex("v1", owner="2")
    builder.add_vertex("v2", owner="1")
    builder.add_vertex("v3", owner="2")
    builder.add_vertex("v4")
    builder.add_payoff_terminal("v0.exit", {"1": half})
    builder.add_payoff_terminal("v1.exit", {"2": half})
    builder.add_terminal("v2.exit", winners=["0", "2"])
    builder.add_terminal("v3.exit")
    builder.add_terminal("v4.exit", winners=["0", "1"])
    for v, nxt in (("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v4")):
        builder.add_edge(v, nxt)
        builder.add_edge(v, f"{v}.exit")
    builder.add_edge("v4", "v2", half)
    builder.add_edge("v4", "v4.exit", half)
    ig = desugar_initialized(builder.build_initialized("v0"))

    # continue on the first visit of v2 (player 1) and v3 (player 2), leave afterwards
    player1 = MemoryMachine.from_tables(
        ("fresh", "seen"), "fresh",
        update={("fresh", "v2"): "seen"},
        choice={("fresh", "v2"): "v3", ("seen", "v2"): "v2.exit"},
        default_choice={"v0": "v1"},
    )
    player2 = MemoryMachine.from_tables(
        ("fresh", "seen"), "fresh",
        update={("fresh", "v3"): "seen"},
        choice={("fresh", "v3"): "v4", ("seen", "v3"): "v3.exit"},
        default_choice={"v1": "v2"},
    )
    return ExampleGame("prop1", ig, {"two-state": FiniteStateProfile({1: player1, 2: player2})})


def _prop2() -> ExampleGame:
    half = Fraction(1, 2)
    builder = GameBuilder(["0", "1", "2"])
    builder.add_vertex("v0", owner="1")
    builder.add_vertex("v1", owner="2")
    builder.add_vertex("v2", owner="0")
    builder.add_payoff_terminal("v0.exit", {"1": half})
    builder.add_payoff_terminal("v1.exit", {"2": half})
    builder.add_terminal("v2.left", winners=["0", "1"])
    builder.add_terminal("v2.right", winners=["0", "2"])
    builder.add_edge("v0", "v1")
    builder.add_edge("v0", "v0.exit")
    builder.add_edge("v1", "v2")
    builder.add_edge("v1", "v1.exit")
    builder.add_edge("v2", "v2.left")
    builder.add_edge("v2", "v2.right")
    ig = desugar_initialized(builder.build_initialized("v0"))
    mix = StationaryProfile({
        "v0": {"v1": Fraction(1)},
        "v1": {"v2": Fraction(1)},
        "v2": {"v2.left": half, "v2.right": half},
    })
    return ExampleGame("prop2", ig, {"mix": mix})


def _prop3(profile_horizon: int) -> ExampleGame:
    machine = TwoCounterMachine((Inc(1, 1),))
    builder = two_counter_builder(machine, companion="1")
    start = black_vertex(0, 1, INIT)
    builder.add_vertex("v1", owner="1")
    builder.add_payoff_terminal("v1.exit", {"1": 1})
    builder.add_edge("v1", start)
    builder.add_edge("v1", "v1.exit")
    ig = desugar_initialized(builder.build_initialized("v1"))

    intended = intended_2cm_profile(machine, profile_horizon)
    machines = dict(intended.machines)
    machines[ig.game.player_index("1")] = MemoryMachine.memoryless({"v1": start})
    return ExampleGame("prop3", ig, {"intended": FiniteStateProfile(machines, intended.flags)})


def example_game(name: str, profile_horizon: int = 25) -> ExampleGame:
    """Built-in example by name

    Args:
        name: prop1, prop2 or prop3
        profile_horizon: Configurations followed by prop3's intended profile

    Raises:
        UnknownExample: Unrecognised name
    """
    if name == "prop1":
        return _prop1()
    if name == "prop2":
        return _prop2()
    if name == "prop3":
        return _prop3(profile_horizon)
    raise UnknownExample(f"unknown example {name!r}; choose one of {', '.join(EXAMPLE_NAMES)}")
