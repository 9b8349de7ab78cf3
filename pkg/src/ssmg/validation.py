#!/usr/bin/env python3
"""
Structural Validation

Checks a candidate game against the SSMG invariants and reports every
violation as data. Nothing here raises for a malformed game.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from src.core import SsmgError
from src.ssmg.game import Game, VectorPayoffGame


class ViolationKind(Enum):
    DUPLICATE_VERTEX = "DuplicateVertex"
    UNKNOWN_VERTEX = "UnknownVertex"
    UNKNOWN_PLAYER = "UnknownPlayer"
    PROB_LABEL = "ProbLabelViolation"
    PROB_RANGE = "ProbRangeViolation"
    PROB_SUM = "ProbSumViolation"
    DUPLICATE_EDGE = "DuplicateEdge"
    EMPTY_SUCCESSORS = "EmptySuccessors"
    TERMINAL_NOT_SINK = "TerminalNotSink"
    PAYOFF_RANGE = "PayoffRange"
    PAYOFF_CONFLICT = "PayoffAndWinSet"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    message: str
    vertex: Optional[str] = None
    edge: Optional[tuple] = None

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.message}"


class GameValidationError(SsmgError):
    """Raised by loaders and builders when a game fails validation."""

    def __init__(self, violations: List[Violation]):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"game has {len(self.violations)} violation(s):\n{lines}")


def validate(game: Game) -> List[Violation]:
    """Check every Game invariant

    Args:
        game: Candidate game (may be arbitrarily malformed)

    Returns:
        List of violations, empty iff the game is valid
    """
    violations: List[Violation] = []
    known = set(game.vertices)
    player_count = len(game.players)

    for v, count in Counter(game.vertices).items():
        if count > 1:
            violations.append(Violation(ViolationKind.DUPLICATE_VERTEX, f"vertex {v!r} listed {count} times", v))
    for name, count in Counter(game.players).items():
        if count > 1:
            violations.append(Violation(ViolationKind.UNKNOWN_PLAYER, f"player {name!r} listed {count} times"))

    for v, player in game.owner.items():
        if v not in known:
            violations.append(Violation(ViolationKind.UNKNOWN_VERTEX, f"owner entry for unknown vertex {v!r}", v))
        if not (isinstance(player, int) and 0 <= player < player_count):
            violations.append(Violation(ViolationKind.UNKNOWN_PLAYER, f"vertex {v!r} owned by unknown player {player!r}", v))
    for player, vertices in game.win_sets.items():
        if not (isinstance(player, int) and 0 <= player < player_count):
            violations.append(Violation(ViolationKind.UNKNOWN_PLAYER, f"win set for unknown player {player!r}"))
        for v in sorted(set(vertices) - known):
            violations.append(Violation(ViolationKind.UNKNOWN_VERTEX, f"win set references unknown vertex {v!r}", v))

    outgoing = {v: [] for v in game.vertices}
    for t in game.transitions:
        edge = (t.source, t.target)
        if t.source not in known or t.target not in known:
            violations.append(Violation(ViolationKind.UNKNOWN_VERTEX, f"edge {edge} references an unknown vertex", edge=edge))
            continue
        stochastic = t.source not in game.owner
        if stochastic and t.prob is None:
            violations.append(Violation(ViolationKind.PROB_LABEL, f"stochastic vertex {t.source!r} has an unlabelled edge", t.source, edge))
            continue
        if not stochastic and t.prob is not None:
            violations.append(Violation(ViolationKind.PROB_LABEL, f"owned vertex {t.source!r} has a probability-labelled edge", t.source, edge))
            continue
        if stochastic and not Fraction(0) <= t.prob <= 1:
            violations.append(Violation(ViolationKind.PROB_RANGE, f"probability {t.prob} outside [0,1]", t.source, edge))
        outgoing[t.source].append(t)

    for v in game.vertices:
        edges = outgoing.get(v, [])
        targets = Counter(t.target for t in edges)
        for w, count in targets.items():
            if count > 1:
                violations.append(Violation(ViolationKind.DUPLICATE_EDGE, f"{count} edges {v!r} -> {w!r}", v, (v, w)))
        if v not in game.owner and edges:
            total = sum((t.prob for t in edges if t.prob is not None), Fraction(0))
            if total != 1:
                violations.append(Violation(ViolationKind.PROB_SUM, f"outgoing probabilities of {v!r} sum to {total}", v))
        successors = {t.target for t in edges if t.prob is None or t.prob > 0}
        if not successors:
            violations.append(Violation(ViolationKind.EMPTY_SUCCESSORS, f"vertex {v!r} has no successor", v))

    sinks_required = set()
    for vertices in game.win_sets.values():
        sinks_required |= set(vertices) & known
    winning = set(sinks_required)
    payoffs = game.payoffs if isinstance(game, VectorPayoffGame) else {}
    for v, payoff in payoffs.items():
        if v not in known:
            violations.append(Violation(ViolationKind.UNKNOWN_VERTEX, f"payoff for unknown vertex {v!r}", v))
            continue
        sinks_required.add(v)
        if v in winning:
            violations.append(Violation(ViolationKind.PAYOFF_CONFLICT, f"vertex {v!r} has both a payoff and win-set membership", v))
        for player, x in payoff.items():
            if not 0 <= player < player_count:
                violations.append(Violation(ViolationKind.UNKNOWN_PLAYER, f"payoff of {v!r} names unknown player {player!r}", v))
            if not Fraction(0) <= x <= 1:
                violations.append(Violation(ViolationKind.PAYOFF_RANGE, f"payoff {x} of {v!r} outside [0,1]", v))

    for v in game.vertices:
        if v in sinks_required:
            successors = {t.target for t in outgoing.get(v, []) if t.prob is None or t.prob > 0}
            if successors != {v}:
                violations.append(Violation(ViolationKind.TERMINAL_NOT_SINK, f"terminal {v!r} has successors {sorted(successors)}", v))

    return violations
