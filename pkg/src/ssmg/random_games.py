#!/usr/bin/env python3
"""
Random Game Corpus

Seeded generator of small SSMGs for the oracle and property suites.
"""

import random
from fractions import Fraction

from src.ssmg.game import GameBuilder, InitializedGame


_SPLITS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4), Fraction(2, 5))


def random_game(rng: random.Random, max_vertices: int = 9, max_players: int = 3,
                max_successors: int = 2) -> InitializedGame:
    """Draw a random valid initialized game

    Args:
        rng: Source of randomness (seed it for reproducible corpora)
        max_vertices: Upper bound on the vertex count (at least 2)
        max_players: Upper bound on the player count (at least 1)
        max_successors: Upper bound on successors per non-terminal vertex

    Returns:
        InitializedGame with initial vertex "v0"
    """
    player_count = rng.randint(1, max_players)
    players = [str(i) for i in range(player_count)]
    size = rng.randint(2, max(2, max_vertices))
    terminal_count = rng.randint(1, min(3, size - 1))
    inner = [f"v{k}" for k in range(size - terminal_count)]
    terminals = [f"t{k}" for k in range(terminal_count)]
    everything = inner + terminals

    builder = GameBuilder(players)
    owners = {}
    for v in inner:
        owners[v] = rng.choice(players) if rng.random() < 0.65 else None
        builder.add_vertex(v, owner=owners[v])
    for t in terminals:
        builder.add_terminal(t, winners=[p for p in players if rng.random() < 0.5])

    for v in inner:
        count = rng.randint(1, max_successors)
        targets = rng.sample(everything, min(count, len(everything)))
        if owners[v] is not None:
            for w in targets:
                builder.add_edge(v, w)
        elif len(targets) == 1:
            builder.add_edge(v, targets[0], 1)
        else:
            remaining = Fraction(1)
            for w in targets[:-1]:
                share = remaining * rng.choice(_SPLITS)
                builder.add_edge(v, w, share)
                remaining -= share
            builder.add_edge(v, targets[-1], remaining)

    return builder.build_initialized("v0")
