#!/usr/bin/env python3
"""
Game Model

Immutable SSMG values and the mutable builder that produces them.

A game is a graph whose vertices are either owned by a player or
stochastic. Owned vertices have unlabelled edges, stochastic vertices carry
rational probabilities. Terminals are vertices whose only successor is
themselves; each player's winning set consists of terminals.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.core import SsmgError


class GameModelError(SsmgError):
    """Raised when a game is used in a way its structure does not allow."""
    pass


PlayerRef = Union[int, str]


@dataclass(frozen=True)
class Transition:
    """Edge source -> target; prob is None exactly when source is owned."""
    source: str
    target: str
    prob: Optional[Fraction] = None


@dataclass(frozen=True)
class Game:
    """A simple stochastic multiplayer game.

    Players are addressed by dense index internally (player 0 first); the
    string identifiers in `players` are only used at the file boundary.
    """
    players: Tuple[str, ...]
    vertices: Tuple[str, ...]
    owner: Mapping[str, int]
    transitions: Tuple[Transition, ...]
    win_sets: Mapping[int, FrozenSet[str]]

    def __post_init__(self):
        # transitions are kept grouped by source in vertex order
        position = {v: k for k, v in enumerate(self.vertices)}
        ordered = sorted(
            enumerate(self.transitions),
            key=lambda item: (position.get(item[1].source, len(position)), item[0]),
        )
        object.__setattr__(self, 'transitions', tuple(t for _, t in ordered))

    @cached_property
    def index(self) -> Dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def _successors(self) -> Dict[str, Tuple[str, ...]]:
        table: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for t in self.transitions:
            if t.source not in table:
                continue
            if t.prob is None or t.prob > 0:
                if t.target not in table[t.source]:
                    table[t.source].append(t.target)
        return {v: tuple(ws) for v, ws in table.items()}

    @cached_property
    def _rows(self) -> Dict[str, Dict[str, Fraction]]:
        rows: Dict[str, Dict[str, Fraction]] = {}
        for t in self.transitions:
            if t.prob is not None and t.prob > 0 and self.owner.get(t.source) is None:
                rows.setdefault(t.source, {})[t.target] = t.prob
        return rows

    @property
    def num_players(self) -> int:
        return len(self.players)

    def player_index(self, player: PlayerRef) -> int:
        """Resolve a player name or index to its dense index."""
        if isinstance(player, int) and not isinstance(player, bool):
            if 0 <= player < len(self.players):
                return player
        elif player in self.players:
            return self.players.index(player)
        raise GameModelError(f"unknown player {player!r}")

    def successors(self, v: str) -> Tuple[str, ...]:
        """The successor set vΔ, in transition order."""
        return self._successors[v]

    def row(self, v: str) -> Dict[str, Fraction]:
        """Transition probabilities of a stochastic vertex."""
        return self._rows.get(v, {})

    def prob(self, v: str, w: str) -> Fraction:
        return self._rows.get(v, {}).get(w, Fraction(0))

    def owner_of(self, v: str) -> Optional[int]:
        return self.owner.get(v)

    def is_stochastic(self, v: str) -> bool:
        return v not in self.owner

    def is_terminal(self, v: str) -> bool:
        return self._successors.get(v) == (v,)

    def win_set(self, player: PlayerRef) -> FrozenSet[str]:
        return self.win_sets.get(self.player_index(player), frozenset())

    def winners(self, v: str) -> Tuple[int, ...]:
        """Indices of the players whose winning set contains v."""
        return tuple(i for i in range(len(self.players)) if v in self.win_sets.get(i, ()))

    @cached_property
    def owned_vertices(self) -> Tuple[str, ...]:
        return tuple(v for v in self.vertices if v in self.owner)

    def owned_by(self, player: PlayerRef) -> Tuple[str, ...]:
        i = self.player_index(player)
        return tuple(v for v in self.owned_vertices if self.owner[v] == i)

    @cached_property
    def terminals(self) -> Tuple[str, ...]:
        return tuple(v for v in self.vertices if self.is_terminal(v))


@dataclass(frozen=True)
class VectorPayoffGame(Game):
    """A game whose terminals may carry a payoff vector instead of win-set membership."""
    payoffs: Mapping[str, Mapping[int, Fraction]] = field(default_factory=dict)


@dataclass(frozen=True)
class InitializedGame:
    game: Game
    initial: str

    def __post_init__(self):
        if self.initial not in self.game.index:
            raise GameModelError(f"initial vertex {self.initial!r} is not a vertex")

    @property
    def players(self) -> Tuple[str, ...]:
        return self.game.players


def require_pure(game: Game) -> Game:
    """Reject vector-payoff games that still need desugaring."""
    if isinstance(game, VectorPayoffGame) and game.payoffs:
        raise GameModelError("game has vector-payoff terminals; desugar it first")
    return game


class GameBuilder:
    """Mutable assembly area for games.

    Example:
        builder = GameBuilder(["0", "1"])
        builder.add_vertex("v0", owner="1")
        builder.add_terminal("win", winners=["0"])
        builder.add_edge("v0", "win")
        ig = builder.build_initialized("v0")
    """

    def __init__(self, players: Sequence[str]):
        self.players: List[str] = list(players)
        self.vertices: List[str] = []
        self.owner: Dict[str, int] = {}
        self.transitions: List[Transition] = []
        self.win_sets: Dict[int, set] = {}
        self.payoffs: Dict[str, Dict[int, Fraction]] = {}

    def _player(self, player: PlayerRef) -> int:
        if isinstance(player, int) and not isinstance(player, bool):
            return player
        return self.players.index(player)

    def add_vertex(self, v: str, owner: Optional[PlayerRef] = None) -> 'GameBuilder':
        self.vertices.append(v)
        if owner is not None:
            self.owner[v] = self._player(owner)
        return self

    def add_edge(self, source: str, target: str, prob=None) -> 'GameBuilder':
        self.transitions.append(
            Transition(source, target, None if prob is None else Fraction(prob))
        )
        return self

    def add_terminal(self, v: str, winners: Iterable[PlayerRef] = ()) -> 'GameBuilder':
        """Add a terminal (self-loop) that belongs to the winners' sets."""
        self.add_vertex(v)
        self.add_edge(v, v, 1)
        for player in winners:
            self.win_sets.setdefault(self._player(player), set()).add(v)
        return self

    def add_payoff_terminal(self, v: str, payoff: Mapping[PlayerRef, object]) -> 'GameBuilder':
        """Add a terminal paying a rational vector; absent players get 0."""
        self.add_vertex(v)
        self.add_edge(v, v, 1)
        self.payoffs[v] = {
            self._player(p): Fraction(x) for p, x in payoff.items() if Fraction(x) != 0
        }
        return self

    def build(self) -> Game:
        """Freeze into a Game (or VectorPayoffGame when payoff terminals exist)."""
        fields = dict(
            players=tuple(self.players),
            vertices=tuple(self.vertices),
            owner=dict(self.owner),
            transitions=tuple(self.transitions),
            win_sets={i: frozenset(vs) for i, vs in self.win_sets.items()},
        )
        if self.payoffs:
            return VectorPayoffGame(payoffs={v: dict(p) for v, p in self.payoffs.items()}, **fields)
        return Game(**fields)

    def build_initialized(self, initial: str) -> InitializedGame:
        return InitializedGame(self.build(), initial)
