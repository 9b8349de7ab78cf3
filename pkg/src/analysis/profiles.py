#!/usr/bin/env python3
"""
Strategy Profiles

Positional, stationary and finite-state profiles, their validation against
a game, and the JSON profile file format.

Finite-state convention: at vertex v with memory m (the memory reached on
the history before v) an owner chooses choice(m, v); every player's memory
then moves to update(m, v).
"""

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, Mapping, Optional, Tuple, Union

from src.core import SsmgError, format_rational, parse_rational
from src.ssmg.game import Game


class ProfileError(SsmgError):
    """Raised for malformed profiles or profiles that do not fit their game."""
    pass


@dataclass(frozen=True)
class StationaryProfile:
    """Owned vertex -> distribution over successors."""
    choices: Mapping[str, Mapping[str, Fraction]]

    def distribution(self, v: str) -> Mapping[str, Fraction]:
        if v not in self.choices:
            raise ProfileError(f"profile has no distribution for {v!r}")
        return self.choices[v]

    def support(self) -> FrozenSet[Tuple[str, str]]:
        return frozenset((v, w) for v, dist in self.choices.items() for w, p in dist.items() if p > 0)


@dataclass(frozen=True)
class PositionalProfile:
    """Owned vertex -> chosen successor."""
    choices: Mapping[str, str]

    def to_stationary(self) -> StationaryProfile:
        return StationaryProfile({v: {w: Fraction(1)} for v, w in self.choices.items()})


@dataclass(frozen=True)
class MachineTables:
    """Explicit tables behind a MemoryMachine, kept for serialisation."""
    update: Mapping[Tuple[Hashable, str], Hashable]
    choice: Mapping[Tuple[Hashable, str], str]
    default_choice: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class MemoryMachine:
    """A finite automaton with output implementing one player's pure strategy."""
    states: Tuple[Hashable, ...]
    initial: Hashable
    update: Callable[[Hashable, str], Hashable]
    choice: Callable[[Hashable, str], str]
    tables: Optional[MachineTables] = None

    @classmethod
    def from_tables(cls, states: Iterable[Hashable], initial: Hashable,
                    update: Mapping[Tuple[Hashable, str], Hashable],
                    choice: Mapping[Tuple[Hashable, str], str],
                    default_choice: Optional[Mapping[str, str]] = None) -> 'MemoryMachine':
        """Table-driven machine

        Args:
            states: Memory elements
            initial: Initial memory element
            update: (memory, vertex) -> memory; absent entries keep the memory
            choice: (memory, vertex) -> successor
            default_choice: vertex -> successor, used when choice has no entry
        """
        tables = MachineTables(dict(update), dict(choice), dict(default_choice or {}))

        def step(m: Hashable, v: str) -> Hashable:
            return tables.update.get((m, v), m)

        def pick(m: Hashable, v: str) -> str:
            if (m, v) in tables.choice:
                return tables.choice[(m, v)]
            if v in tables.default_choice:
                return tables.default_choice[v]
            raise ProfileError(f"no choice for vertex {v!r} in memory {m!r}")

        return cls(tuple(states), initial, step, pick, tables)

    @classmethod
    def memoryless(cls, choices: Mapping[str, str]) -> 'MemoryMachine':
        return cls.from_tables(("*",), "*", {}, {}, default_choice=choices)


@dataclass(frozen=True)
class FiniteStateProfile:
    """Per-player memory machines, keyed by player index.

    Players owning no vertex may be omitted. `flags` carries notes such as
    truncation of an infinite-memory strategy.
    """
    machines: Mapping[int, MemoryMachine]
    flags: Tuple[str, ...] = ()

    @classmethod
    def from_positional(cls, game: Game, profile: PositionalProfile) -> 'FiniteStateProfile':
        machines = {}
        for i in range(game.num_players):
            owned = {v: profile.choices[v] for v in game.owned_by(i) if v in profile.choices}
            if owned:
                machines[i] = MemoryMachine.memoryless(owned)
        return cls(machines)

    def machine(self, player: int) -> Optional[MemoryMachine]:
        return self.machines.get(player)


Profile = Union[PositionalProfile, StationaryProfile, FiniteStateProfile]


def as_stationary(profile: Union[PositionalProfile, StationaryProfile]) -> StationaryProfile:
    if isinstance(profile, PositionalProfile):
        return profile.to_stationary()
    if isinstance(profile, StationaryProfile):
        return profile
    raise ProfileError(f"expected a positional or stationary profile, got {type(profile).__name__}")


def check_stationary(game: Game, profile: StationaryProfile, free_player: Optional[int] = None) -> None:
    """Validate a stationary profile against a game

    Args:
        game: The game
        profile: Profile to check
        free_player: Player whose vertices may be left unspecified

    Raises:
        ProfileError: Missing distribution, entry on a non-owned vertex,
            negative entry, support outside vΔ, or a sum other than 1
    """
    for v in profile.choices:
        if v not in game.index:
            raise ProfileError(f"profile names unknown vertex {v!r}")
        if game.owner_of(v) is None:
            raise ProfileError(f"profile assigns a distribution to stochastic vertex {v!r}")
    for v in game.owned_vertices:
        if v not in profile.choices:
            if game.owner[v] == free_player:
                continue
            raise ProfileError(f"profile has no distribution for owned vertex {v!r}")
        dist = profile.choices[v]
        successors = set(game.successors(v))
        for w, p in dist.items():
            if p < 0:
                raise ProfileError(f"negative probability {p} on {v!r} -> {w!r}")
            if p > 0 and w not in successors:
                raise ProfileError(f"{v!r} -> {w!r} is not an edge")
        total = sum(dist.values(), Fraction(0))
        if total != 1:
            raise ProfileError(f"distribution at {v!r} sums to {total}")


def check_positional(game: Game, profile: PositionalProfile) -> None:
    check_stationary(game, profile.to_stationary())


def profile_rows(game: Game, profile: StationaryProfile,
                 free_player: Optional[int] = None) -> Dict[str, Dict[str, Fraction]]:
    """Positive transition rows of the chain induced by a profile.

    Vertices owned by free_player get no row.
    """
    rows: Dict[str, Dict[str, Fraction]] = {}
    for v in game.vertices:
        owner = game.owner_of(v)
        if owner is None:
            rows[v] = dict(game.row(v))
        elif owner != free_player:
            rows[v] = {w: p for w, p in profile.distribution(v).items() if p > 0}
    return rows


def random_stationary_profile(rng: random.Random, game: Game) -> StationaryProfile:
    """Random rational stationary profile (used by property suites)."""
    choices = {}
    for v in game.owned_vertices:
        successors = game.successors(v)
        weights = [rng.randint(0, 3) for _ in successors]
        if sum(weights) == 0:
            weights[rng.randrange(len(weights))] = 1
        total = sum(weights)
        choices[v] = {w: Fraction(k, total) for w, k in zip(successors, weights)}
    return StationaryProfile(choices)


def _memory_key(value: Any) -> Hashable:
    # JSON has no tuples; tuple-valued memory elements come back as lists
    if isinstance(value, list):
        return tuple(_memory_key(x) for x in value)
    return value


def profile_from_dict(data: Dict[str, Any], game: Game) -> Profile:
    """Parse a profile JSON object

    Raises:
        ProfileError: On malformed content
    """
    if not isinstance(data, dict):
        raise ProfileError("profile: expected an object")
    kind = data.get("kind")
    try:
        if kind == "positional":
            return PositionalProfile(dict(data["choices"]))
        if kind == "stationary":
            return StationaryProfile({
                v: {w: parse_rational(p, f"choices.{v}.{w}") for w, p in dist.items()}
                for v, dist in data["choices"].items()
            })
        if kind == "finite-state":
            machines = {}
            for name, machine in data["players"].items():
                player = game.player_index(name)
                machines[player] = MemoryMachine.from_tables(
                    [_memory_key(m) for m in machine["states"]],
                    _memory_key(machine["initial"]),
                    {(_memory_key(row["state"]), row["vertex"]): _memory_key(row["next"])
                     for row in machine.get("update", [])},
                    {(_memory_key(row["state"]), row["vertex"]): row["to"] for row in machine.get("choice", [])},
                    machine.get("default_choice", {}),
                )
            return FiniteStateProfile(machines, tuple(data.get("flags", ())))
    except (KeyError, TypeError, AttributeError) as e:
        raise ProfileError(f"profile ({kind}): missing or malformed field {e}") from e
    except ValueError as e:
        raise ProfileError(str(e)) from e
    raise ProfileError(f"profile: unknown kind {kind!r}")


def profile_to_dict(profile: Profile, game: Game) -> Dict[str, Any]:
    """Serialise a profile; finite-state machines must be table-driven."""
    if isinstance(profile, PositionalProfile):
        return {"kind": "positional", "choices": dict(profile.choices)}
    if isinstance(profile, StationaryProfile):
        return {
            "kind": "stationary",
            "choices": {v: {w: format_rational(p) for w, p in dist.items()}
                        for v, dist in profile.choices.items()},
        }
    players = {}
    for i, machine in sorted(profile.machines.items()):
        if machine.tables is None:
            raise ProfileError(f"machine of player {game.players[i]!r} is not table-driven")
        players[game.players[i]] = {
            "states": list(machine.states),
            "initial": machine.initial,
            "update": [{"state": m, "vertex": v, "next": n} for (m, v), n in machine.tables.update.items()],
            "choice": [{"state": m, "vertex": v, "to": w} for (m, v), w in machine.tables.choice.items()],
            "default_choice": dict(machine.tables.default_choice),
        }
    result = {"kind": "finite-state", "players": players}
    if profile.flags:
        result["flags"] = list(profile.flags)
    return result


def load_profile(path: Path, game: Game) -> Profile:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ProfileError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    return profile_from_dict(data, game)


def save_profile(profile: Profile, game: Game, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(profile_to_dict(profile, game), f, indent=2)
        f.write("\n")
