#!/usr/bin/env python3
"""
Best Responses

Maximal reachability values of one player against a fixed profile. The
values are the optimum of

    minimise   Σ r_v
    subject to r_v >= 0,  r_v = 1 on F_i,
               r_v >= r_w            for v owned by i and w in vΔ,
               r_v  = Σ σ(w|v)·r_w   otherwise,

restricted to the vertices where player i can still reach F_i. Policy
iteration is kept alongside as an independent oracle.
"""

from fractions import Fraction
from typing import Dict, Mapping, Optional, Set

from src.analysis.markov import Rows, backward_closure, forward_closure, reach_probabilities
from src.analysis.profiles import StationaryProfile, as_stationary, check_stationary, profile_rows
from src.core import SsmgError
from src.exact.simplex import LinearProgram, Relation, lp_min
from src.ssmg.game import Game, InitializedGame, require_pure


ValueVector = Dict[str, Fraction]


class BestResponseError(SsmgError):
    """Raised when the best-response programme has no optimum (a modelling bug)."""
    pass


def _deviation_rows(game: Game, profile: StationaryProfile, player: int) -> Rows:
    return profile_rows(game, profile, free_player=player)


def _with_all_choices(game: Game, rows: Rows, player: int) -> Dict[str, Dict[str, Fraction]]:
    """Rows where the player's vertices may move to every successor."""
    graph = {v: dict(row) for v, row in rows.items()}
    for v in game.owned_by(player):
        graph[v] = {w: Fraction(1) for w in game.successors(v)}
    return graph


def _optimal_values(game: Game, profile: StationaryProfile, player: int,
                    start: Optional[str] = None) -> ValueVector:
    rows = _deviation_rows(game, profile, player)
    targets = set(game.win_set(player))
    graph = _with_all_choices(game, rows, player)
    region = backward_closure(graph, targets) - targets
    if start is not None:
        region &= forward_closure(graph, start)
    variables = [v for v in game.vertices if v in region]
    position = {v: k for k, v in enumerate(variables)}
    width = len(variables)

    constraints = []
    for v in variables:
        if game.owner_of(v) == player:
            for w in game.successors(v):
                coefficients = [0] * width
                coefficients[position[v]] = 1
                if w in targets:
                    constraints.append((coefficients, Relation.GE, 1))
                elif w in position and w != v:
                    coefficients[position[w]] = -1
                    constraints.append((coefficients, Relation.GE, 0))
        else:
            coefficients = [Fraction(0)] * width
            coefficients[position[v]] += 1
            constant = Fraction(0)
            for w, p in rows[v].items():
                if w in targets:
                    constant += p
                elif w in position:
                    coefficients[position[w]] -= p
            constraints.append((coefficients, Relation.EQ, constant))

    values = {v: Fraction(0) for v in game.vertices}
    values.update({v: Fraction(1) for v in targets})
    if not variables:
        return values
    result = lp_min(LinearProgram.build([1] * width, constraints))
    if not result.is_optimal:
        raise BestResponseError(f"best-response programme is {result.status.value}")
    values.update(zip(variables, result.point))
    return values


def best_response_value(ig: InitializedGame, profile: StationaryProfile, player,
                        reachable_only: bool = False) -> ValueVector:
    """Optimal reachability values of a player against a stationary profile

    Args:
        ig: Initialized game
        profile: Profile of the other players (the player's own entries are ignored)
        player: Player name or index
        reachable_only: Only solve for vertices the player can reach from v0
            (other vertices are reported as 0)

    Returns:
        Mapping vertex -> r^i_v
    """
    game = require_pure(ig.game)
    i = game.player_index(player)
    profile = as_stationary(profile)
    check_stationary(game, profile, free_player=i)
    return _optimal_values(game, profile, i, start=ig.initial if reachable_only else None)


def best_response_strategy(ig: InitializedGame, profile: StationaryProfile, player,
                           values: Optional[Mapping[str, Fraction]] = None) -> Dict[str, str]:
    """A positional strategy attaining the best-response values

    Among value-maximising successors the one closest to F_i (in the graph
    of value-maximising moves) is picked, which rules out value-preserving
    cycles that never reach the target.
    """
    game = require_pure(ig.game)
    i = game.player_index(player)
    profile = as_stationary(profile)
    if values is None:
        values = best_response_value(ig, profile, i)
    rows = _deviation_rows(game, profile, i)
    owned = set(game.owned_by(i))
    best_moves = {
        v: [w for w in game.successors(v) if values[w] == max(values[u] for u in game.successors(v))]
        for v in owned
    }

    distance: Dict[str, int] = {v: 0 for v in game.win_set(i)}
    layer = 0
    settled: Set[str] = set(distance)
    while True:
        layer += 1
        fresh = []
        for v in game.vertices:
            if v in settled or values[v] == 0:
                continue
            successors = best_moves[v] if v in owned else [w for w, p in rows.get(v, {}).items() if p > 0]
            if any(w in settled for w in successors):
                fresh.append(v)
        if not fresh:
            break
        for v in fresh:
            distance[v] = layer
            settled.add(v)

    strategy = {}
    for v in game.owned_by(i):
        candidates = [w for w in best_moves[v] if w in distance]
        if candidates:
            strategy[v] = min(candidates, key=lambda w: distance[w])
        else:
            strategy[v] = best_moves[v][0]
    return strategy


def best_response_by_policy_iteration(ig: InitializedGame, profile: StationaryProfile, player) -> ValueVector:
    """Exact policy iteration for the same values (used as a test oracle)."""
    game = require_pure(ig.game)
    i = game.player_index(player)
    profile = as_stationary(profile)
    check_stationary(game, profile, free_player=i)
    rows = _deviation_rows(game, profile, i)
    targets = game.win_set(i)
    strategy = {v: game.successors(v)[0] for v in game.owned_by(i)}

    while True:
        chain = dict(rows)
        chain.update({v: {w: Fraction(1)} for v, w in strategy.items()})
        values = reach_probabilities(chain, targets, game.vertices)
        improved = False
        for v in game.owned_by(i):
            best = max(game.successors(v), key=lambda w: values[w])
            if values[best] > values[strategy[v]]:
                strategy[v] = best
                improved = True
        if not improved:
            return values
