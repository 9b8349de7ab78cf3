#!/usr/bin/env python3
"""
Markov Chain Reachability

Exact reachability probabilities in the chain a stationary profile induces.
Values are pinned to 1 on the target and to 0 wherever the target cannot be
reached; the remaining system is nonsingular and gives the least solution.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Set, Tuple

from src.analysis.profiles import StationaryProfile, as_stationary, check_stationary, profile_rows
from src.exact.linalg import LinearSystem, solve_system
from src.ssmg.game import Game, InitializedGame, require_pure


Rows = Mapping[str, Mapping[str, Fraction]]
PayoffVector = Tuple[Fraction, ...]


def backward_closure(rows: Rows, targets: Iterable[str]) -> Set[str]:
    """Vertices from which some target is reachable along positive edges."""
    predecessors: Dict[str, Set[str]] = {}
    for v, row in rows.items():
        for w, p in row.items():
            if p > 0:
                predecessors.setdefault(w, set()).add(v)
    seen = set(targets)
    queue = deque(seen)
    while queue:
        w = queue.popleft()
        for v in predecessors.get(w, ()):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def forward_closure(rows: Rows, start: str) -> Set[str]:
    """Vertices reachable from start along positive edges."""
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w, p in rows.get(v, {}).items():
            if p > 0 and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def reach_probabilities(rows: Rows, targets: Iterable[str], order: Sequence[str],
                        start: Optional[str] = None) -> Dict[str, Fraction]:
    """Exact probability of eventually hitting a target

    Args:
        rows: Positive transition rows; vertices without a row are absorbing
        targets: Target vertices (value 1)
        order: Vertex order used to lay out the linear system
        start: If given, only vertices reachable from start are solved

    Returns:
        Mapping vertex -> probability (0 for vertices that cannot reach a target)
    """
    targets = set(targets)
    region = backward_closure(rows, targets) - targets
    if start is not None:
        region &= forward_closure(rows, start)
    unknown = [v for v in order if v in region]
    position = {v: k for k, v in enumerate(unknown)}

    matrix = []
    rhs = []
    for v in unknown:
        row = [Fraction(0)] * len(unknown)
        row[position[v]] = Fraction(1)
        constant = Fraction(0)
        for w, p in rows[v].items():
            if w in targets:
                constant += p
            elif w in position:
                row[position[w]] -= p
        matrix.append(row)
        rhs.append(constant)

    solution = solve_system(LinearSystem.of(matrix, rhs)) if unknown else []
    values = {v: Fraction(0) for v in order}
    values.update({v: Fraction(1) for v in targets})
    values.update(zip(unknown, solution))
    return values


def reachable_support(game: Game, profile: StationaryProfile, player) -> Set[str]:
    """The set R_i of vertices from which player's winning set is reachable."""
    require_pure(game)
    i = game.player_index(player)
    profile = as_stationary(profile)
    check_stationary(game, profile)
    return backward_closure(profile_rows(game, profile), game.win_set(i))


def value_vector(game: Game, profile: StationaryProfile, player) -> Dict[str, Fraction]:
    """z^i_v = Prob_v(Reach(F_i)) for every vertex v."""
    require_pure(game)
    i = game.player_index(player)
    profile = as_stationary(profile)
    check_stationary(game, profile)
    return reach_probabilities(profile_rows(game, profile), game.win_set(i), game.vertices)


def stationary_payoff(ig: InitializedGame, profile: StationaryProfile) -> PayoffVector:
    """Exact payoff vector of a stationary (or positional) profile

    Args:
        ig: Initialized game
        profile: Stationary or positional profile covering every owned vertex

    Returns:
        Tuple of reach probabilities, one per player index
    """
    game = require_pure(ig.game)
    profile = as_stationary(profile)
    check_stationary(game, profile)
    rows = profile_rows(game, profile)
    return tuple(
        reach_probabilities(rows, game.win_set(i), game.vertices, start=ig.initial)[ig.initial]
        for i in range(game.num_players)
    )


@dataclass(frozen=True)
class TerminalDistribution:
    """Where play ends: mass per terminal plus the mass that never terminates."""
    masses: Mapping[str, Fraction]
    nontermination: Fraction

    @property
    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0)) + self.nontermination


def terminal_distribution(ig: InitializedGame, profile: StationaryProfile) -> TerminalDistribution:
    """Absorption probabilities of every terminal, and of the non-terminating region."""
    game = require_pure(ig.game)
    profile = as_stationary(profile)
    check_stationary(game, profile)
    rows = profile_rows(game, profile)
    masses = {
        t: reach_probabilities(rows, {t}, game.vertices, start=ig.initial)[ig.initial]
        for t in game.terminals
    }
    trap = set(game.vertices) - backward_closure(rows, game.terminals)
    stuck = reach_probabilities(rows, trap, game.vertices, start=ig.initial)[ig.initial] if trap else Fraction(0)
    return TerminalDistribution(masses, stuck)
