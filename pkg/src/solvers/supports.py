#!/usr/bin/env python3
"""
Supports

A support fixes which edges carry positive probability: every positive
stochastic edge, and a nonempty subset of the edges of each owned vertex.
"""

import itertools
from math import prod
from typing import Dict, FrozenSet, Iterator, List, Set, Tuple

from src.analysis.markov import backward_closure
from src.core import SsmgError
from src.ssmg.game import Game, require_pure


Support = FrozenSet[Tuple[str, str]]


class SupportError(SsmgError):
    """Raised when a support does not fit its game."""
    pass


def _nonempty_subsets(items: Tuple[str, ...]) -> List[Tuple[str, ...]]:
    subsets = []
    for mask in range(1, 2 ** len(items)):
        subsets.append(tuple(w for k, w in enumerate(items) if mask >> k & 1))
    return subsets


def forced_edges(game: Game) -> Set[Tuple[str, str]]:
    return {(v, w) for v in game.vertices if game.is_stochastic(v) for w in game.successors(v)}


def count_supports(game: Game) -> int:
    """Number of supports: the product of 2^|vΔ| - 1 over owned vertices."""
    return prod(2 ** len(game.successors(v)) - 1 for v in game.owned_vertices)


def enumerate_supports(game: Game) -> Iterator[Support]:
    """Yield every support once, in a fixed order

    Owned vertices are taken in vertex order; each ranges over its nonempty
    successor subsets in bitmask order, the last vertex varying fastest.
    """
    require_pure(game)
    base = forced_edges(game)
    owned = game.owned_vertices
    choices = [_nonempty_subsets(game.successors(v)) for v in owned]
    for combination in itertools.product(*choices):
        edges = set(base)
        for v, subset in zip(owned, combination):
            edges.update((v, w) for w in subset)
        yield frozenset(edges)


def check_support(game: Game, support: Support) -> None:
    """Raise SupportError unless the support satisfies the type invariants."""
    base = forced_edges(game)
    missing = base - support
    if missing:
        raise SupportError(f"support lacks stochastic edges {sorted(missing)}")
    for v, w in support:
        if v not in game.index or w not in game.successors(v):
            raise SupportError(f"({v!r}, {w!r}) is not an edge")
        if game.is_stochastic(v) and (v, w) not in base:
            raise SupportError(f"({v!r}, {w!r}) is not a positive stochastic edge")
    chosen = {v for v, _ in support}
    for v in game.owned_vertices:
        if v not in chosen:
            raise SupportError(f"support chooses no edge at owned vertex {v!r}")


def support_graph(support: Support) -> Dict[str, Dict[str, int]]:
    graph: Dict[str, Dict[str, int]] = {}
    for v, w in support:
        graph.setdefault(v, {})[w] = 1
    return graph


def reach_sets(game: Game, support: Support) -> Dict[int, Set[str]]:
    """R_i for every player: vertices from which F_i is reachable in (V, S)."""
    check_support(game, support)
    graph = support_graph(support)
    return {i: backward_closure(graph, game.win_set(i)) for i in range(game.num_players)}
