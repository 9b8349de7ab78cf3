#!/usr/bin/env python3
"""
Bounded Payoff

Truncated forward exploration of the play tree of a pure profile. Mass that
settles on a terminal within the horizon is exact; mass still travelling
after `horizon` vertices is the width of every player's interval.
"""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from src.analysis.product import JointMemory, Memory
from src.analysis.profiles import FiniteStateProfile, PositionalProfile, check_positional
from src.core import log_to_file
from src.ssmg.game import InitializedGame, require_pure


@dataclass(frozen=True)
class BoundedPayoff:
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper


def bounded_payoff(ig: InitializedGame,
                   profile: Union[PositionalProfile, FiniteStateProfile],
                   horizon: int,
                   log_file: Optional[Path] = None) -> Tuple[BoundedPayoff, ...]:
    """Exact payoff intervals from the first `horizon` vertices of every play

    Args:
        ig: Initialized game
        profile: Positional or finite-state profile
        horizon: Number of vertices explored along each play (0 explores
            nothing). This counts vertices, not machine steps: a step of a
            two-counter game takes STEP_VERTICES vertices on its main line
        log_file: Optional log file

    Returns:
        One BoundedPayoff per player; upper − lower is the unexplored mass
    """
    game = require_pure(ig.game)
    if isinstance(profile, PositionalProfile):
        check_positional(game, profile)
        profile = FiniteStateProfile.from_positional(game, profile)
    joint = JointMemory(game, profile)

    frontier: Dict[Tuple[str, Memory], Fraction] = {(ig.initial, joint.initial()): Fraction(1)}
    settled = [Fraction(0)] * game.num_players
    for _ in range(horizon):
        if not frontier:
            break
        nxt: Dict[Tuple[str, Memory], Fraction] = defaultdict(Fraction)
        for (v, memory), mass in frontier.items():
            if game.is_terminal(v):
                for i in game.winners(v):
                    settled[i] += mass
                continue
            after = joint.update(memory, v)
            for w, p in joint.moves(memory, v):
                nxt[(w, after)] += mass * p
        frontier = nxt

    open_mass = sum(frontier.values(), Fraction(0))
    log_to_file(log_file, f"[Bounded] horizon {horizon}: open mass {open_mass}, {len(frontier)} open states")
    return tuple(BoundedPayoff(lo, lo + open_mass) for lo in settled)
