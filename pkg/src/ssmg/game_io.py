#!/usr/bin/env python3
"""
Game File Format

JSON (UTF-8) serialisation of initialized games:

    {
      "players": ["0", "1"],
      "initial": "v0",
      "vertices": [{"id": "v0", "owner": "1", "terminal_payoff": null}, ...],
      "edges": [{"from": "v0", "to": "t", "prob": null}, ...],
      "win_sets": {"0": ["t"]}
    }

Terminal self-loops are not written; the loader adds a self-loop to every
vertex without listed edges.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

from src.core import SsmgError, format_rational, parse_rational
from src.ssmg.game import Game, InitializedGame, Transition, VectorPayoffGame
from src.ssmg.validation import GameValidationError, validate


class GameFormatError(SsmgError):
    """Raised when a game file cannot be parsed."""
    pass


def _require(data: Dict[str, Any], key: str, where: str, kind=None):
    if key not in data:
        raise GameFormatError(f"{where}: missing field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise GameFormatError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def game_from_dict(data: Dict[str, Any], check: bool = True) -> InitializedGame:
    """Build an initialized game from its JSON object

    Args:
        data: Parsed JSON object
        check: Run validate() and raise on violations

    Returns:
        InitializedGame (with a VectorPayoffGame if any terminal_payoff is set)

    Raises:
        GameFormatError: On structural or rational-literal errors
        GameValidationError: If check is set and the game is invalid
    """
    if not isinstance(data, dict):
        raise GameFormatError("top level: expected an object")
    players = _require(data, "players", "top level", list)
    if not players or not all(isinstance(p, str) for p in players):
        raise GameFormatError("players: expected a nonempty list of strings")
    initial = _require(data, "initial", "top level", str)
    player_index = {p: i for i, p in enumerate(players)}

    def player_of(name, where):
        if name not in player_index:
            raise GameFormatError(f"{where}: unknown player {name!r}")
        return player_index[name]

    vertices: List[str] = []
    owner: Dict[str, int] = {}
    payoffs: Dict[str, Dict[int, Fraction]] = {}
    for k, entry in enumerate(_require(data, "vertices", "top level", list)):
        where = f"vertices[{k}]"
        if not isinstance(entry, dict):
            raise GameFormatError(f"{where}: expected an object")
        v = _require(entry, "id", where, str)
        vertices.append(v)
        if entry.get("owner") is not None:
            owner[v] = player_of(entry["owner"], f"{where}.owner")
        if entry.get("terminal_payoff") is not None:
            raw = entry["terminal_payoff"]
            if not isinstance(raw, dict):
                raise GameFormatError(f"{where}.terminal_payoff: expected an object")
            try:
                payoffs[v] = {
                    player_of(p, f"{where}.terminal_payoff"): parse_rational(x, f"{where}.terminal_payoff.{p}")
                    for p, x in raw.items()
                }
                payoffs[v] = {i: x for i, x in payoffs[v].items() if x != 0}
            except ValueError as e:
                raise GameFormatError(str(e)) from e

    transitions: List[Transition] = []
    for k, entry in enumerate(_require(data, "edges", "top level", list)):
        where = f"edges[{k}]"
        if not isinstance(entry, dict):
            raise GameFormatError(f"{where}: expected an object")
        source = _require(entry, "from", where, str)
        target = _require(entry, "to", where, str)
        prob = entry.get("prob")
        try:
            value = None if prob is None else parse_rational(prob, f"{where}.prob")
        except ValueError as e:
            raise GameFormatError(str(e)) from e
        transitions.append(Transition(source, target, value))

    with_edges = {t.source for t in transitions}
    for v in vertices:
        if v not in with_edges:
            transitions.append(Transition(v, v, None if v in owner else Fraction(1)))

    win_sets = {}
    for name, members in (data.get("win_sets") or {}).items():
        if not isinstance(members, list):
            raise GameFormatError(f"win_sets.{name}: expected a list")
        win_sets[player_of(name, "win_sets")] = frozenset(members)

    fields = dict(
        players=tuple(players),
        vertices=tuple(vertices),
        owner=owner,
        transitions=tuple(transitions),
        win_sets=win_sets,
    )
    game = VectorPayoffGame(payoffs=payoffs, **fields) if payoffs else Game(**fields)

    if check:
        violations = validate(game)
        if violations:
            raise GameValidationError(violations)
    if initial not in set(vertices):
        raise GameFormatError(f"initial: {initial!r} is not a listed vertex")
    return InitializedGame(game, initial)


def game_to_dict(ig: InitializedGame) -> Dict[str, Any]:
    """Serialise an initialized game to its JSON object."""
    game = ig.game
    payoffs = game.payoffs if isinstance(game, VectorPayoffGame) else {}
    by_source: Dict[str, List[Transition]] = {}
    for t in game.transitions:
        by_source.setdefault(t.source, []).append(t)

    edges = []
    for t in game.transitions:
        own = by_source[t.source]
        if len(own) == 1 and t.target == t.source and (t.prob is None or t.prob == 1):
            continue
        edges.append({
            "from": t.source,
            "to": t.target,
            "prob": None if t.prob is None else format_rational(t.prob),
        })

    return {
        "players": list(game.players),
        "initial": ig.initial,
        "vertices": [
            {
                "id": v,
                "owner": None if game.owner_of(v) is None else game.players[game.owner[v]],
                "terminal_payoff": (
                    {game.players[i]: format_rational(x) for i, x in sorted(payoffs[v].items())}
                    if v in payoffs else None
                ),
            }
            for v in game.vertices
        ],
        "edges": edges,
        "win_sets": {
            game.players[i]: [v for v in game.vertices if v in members]
            for i, members in sorted(game.win_sets.items())
        },
    }


def load(path: Path, check: bool = True) -> InitializedGame:
    """Load a game file

    Args:
        path: JSON game file
        check: Validate before returning

    Returns:
        InitializedGame

    Raises:
        GameFormatError: Unreadable JSON (with line/column) or malformed fields
        GameValidationError: Violations found by validate()
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise GameFormatError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    return game_from_dict(data, check=check)


def save(ig: InitializedGame, path: Path) -> None:
    """Write a game file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(game_to_dict(ig), f, indent=2)
        f.write("\n")
