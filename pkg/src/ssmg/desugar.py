#!/usr/bin/env python3
"""
Vector Payoff Desugaring

Replaces every terminal that pays a rational vector with a flat lottery:
a stochastic vertex with D equiprobable 0/1 terminals, D being the lcm of
the payoff denominators. Branch b wins for player i iff b < p_i·D, so each
player's winning mass below the lottery is exactly p_i.
"""

from fractions import Fraction
from math import lcm
from typing import Dict, List

from src.core import SsmgError
from src.ssmg.game import Game, InitializedGame, Transition, VectorPayoffGame


DEFAULT_MAX_BRANCHES = 10 ** 6


class DesugarError(SsmgError):
    """Raised when a payoff vector cannot be realised as a lottery."""
    pass


def branch_id(v: str, branch: int) -> str:
    """Vertex id of the branch-th lottery terminal under v."""
    return f"{v}.{branch}"


def desugar(vg: Game, max_branches: int = DEFAULT_MAX_BRANCHES) -> Game:
    """Turn a vector-payoff game into a pure 0/1 game

    Args:
        vg: Game whose terminals may carry payoff vectors
        max_branches: Largest lottery size accepted

    Returns:
        Game without payoff terminals; original vertex ids are kept

    Raises:
        DesugarError: Payoff component outside [0,1], non-terminal payoff
            vertex, lottery larger than max_branches, or an id clash
    """
    if not isinstance(vg, VectorPayoffGame) or not vg.payoffs:
        return Game(vg.players, vg.vertices, dict(vg.owner), vg.transitions, dict(vg.win_sets))

    win_sets: Dict[int, set] = {i: set(vs) for i, vs in vg.win_sets.items()}
    owner = dict(vg.owner)
    vertices: List[str] = []
    transitions = [t for t in vg.transitions if t.source not in vg.payoffs]
    known = set(vg.vertices)

    for v in vg.vertices:
        vertices.append(v)
        if v not in vg.payoffs:
            continue
        payoff = vg.payoffs[v]
        for player, x in payoff.items():
            if not Fraction(0) <= x <= 1:
                raise DesugarError(f"payoff {x} of {v!r} for player {player} outside [0,1]")
        if not vg.is_terminal(v):
            raise DesugarError(f"payoff vertex {v!r} is not terminal")

        size = lcm(1, *(Fraction(x).denominator for x in payoff.values()))
        if size > max_branches:
            raise DesugarError(f"payoff of {v!r} needs {size} branches (cap {max_branches})")

        if size == 1:
            transitions.append(Transition(v, v, None if v in owner else Fraction(1)))
            for player, x in payoff.items():
                if x == 1:
                    win_sets.setdefault(player, set()).add(v)
            continue

        owner.pop(v, None)
        share = Fraction(1, size)
        for b in range(size):
            leaf = branch_id(v, b)
            if leaf in known:
                raise DesugarError(f"lottery terminal {leaf!r} clashes with an existing vertex")
            vertices.append(leaf)
            transitions.append(Transition(v, leaf, share))
            transitions.append(Transition(leaf, leaf, Fraction(1)))
            for player, x in payoff.items():
                if b < x * size:
                    win_sets.setdefault(player, set()).add(leaf)

    return Game(
        players=vg.players,
        vertices=tuple(vertices),
        owner=owner,
        transitions=tuple(transitions),
        win_sets={i: frozenset(vs) for i, vs in sorted(win_sets.items()) if vs},
    )


def desugar_initialized(ig: InitializedGame, max_branches: int = DEFAULT_MAX_BRANCHES) -> InitializedGame:
    """desugar() lifted to initialized games."""
    return InitializedGame(desugar(ig.game, max_branches), ig.initial)
