#!/usr/bin/env python3
"""
Nash Equilibrium Verification

A profile is an equilibrium iff no player's best-response value at v0
exceeds her payoff. Payoff thresholds x <= payoff <= y are reported
separately from the equilibrium verdict.
"""

import concurrent.futures
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from src.analysis.best_response import best_response_value
from src.analysis.markov import PayoffVector, stationary_payoff
from src.analysis.product import DEFAULT_MEMORY_CAP, build_product, finite_state_payoff
from src.analysis.profiles import FiniteStateProfile, StationaryProfile, as_stationary
from src.core import SsmgError, log_to_file
from src.ssmg.game import InitializedGame


class ThresholdError(SsmgError):
    """Raised for threshold vectors of the wrong length or with x > y."""
    pass


@dataclass(frozen=True)
class Thresholds:
    """Lower and upper payoff bounds, one entry per player."""
    x: Tuple[Fraction, ...]
    y: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise ThresholdError(f"x has {len(self.x)} entries, y has {len(self.y)}")
        for i, (lo, hi) in enumerate(zip(self.x, self.y)):
            if lo > hi:
                raise ThresholdError(f"x[{i}] = {lo} exceeds y[{i}] = {hi}")

    @classmethod
    def of(cls, x: Sequence, y: Sequence) -> 'Thresholds':
        return cls(tuple(Fraction(a) for a in x), tuple(Fraction(b) for b in y))

    @classmethod
    def unconstrained(cls, players: int) -> 'Thresholds':
        return cls((Fraction(0),) * players, (Fraction(1),) * players)

    @classmethod
    def player0_wins(cls, players: int) -> 'Thresholds':
        return cls((Fraction(1),) + (Fraction(0),) * (players - 1), (Fraction(1),) * players)

    def check_players(self, players: int) -> None:
        if len(self.x) != players:
            raise ThresholdError(f"thresholds have {len(self.x)} entries for {players} players")

    def contains(self, payoff: Sequence[Fraction]) -> bool:
        return all(lo <= z <= hi for lo, z, hi in zip(self.x, payoff, self.y))


@dataclass(frozen=True)
class NeVerdict:
    """Outcome of an equilibrium check."""
    is_equilibrium: bool
    payoff: PayoffVector
    deviations: Tuple[Fraction, ...]
    thresholds_met: bool

    @property
    def profitable_deviators(self) -> List[int]:
        return [i for i, (z, r) in enumerate(zip(self.payoff, self.deviations)) if r != z]

    @property
    def accepted(self) -> bool:
        return self.is_equilibrium and self.thresholds_met


def _collect(players: int, value_at_start: Callable[[int], Fraction], jobs: int) -> Tuple[Fraction, ...]:
    if jobs <= 1 or players <= 1:
        return tuple(value_at_start(i) for i in range(players))
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
        futures = [executor.submit(value_at_start, i) for i in range(players)]
        return tuple(f.result() for f in futures)


def verify_ne(ig: InitializedGame, profile: StationaryProfile,
              thresholds: Optional[Thresholds] = None,
              jobs: int = 1, log_file: Optional[Path] = None) -> NeVerdict:
    """Check whether a stationary (or positional) profile is a Nash equilibrium

    Args:
        ig: Initialized game
        profile: Stationary or positional profile
        thresholds: Payoff bounds (default: unconstrained)
        jobs: Worker threads for the per-player best responses
        log_file: Optional log file

    Returns:
        NeVerdict with payoff, best-response values at v0 and the threshold check
    """
    players = ig.game.num_players
    thresholds = thresholds or Thresholds.unconstrained(players)
    thresholds.check_players(players)
    profile = as_stationary(profile)
    payoff = stationary_payoff(ig, profile)
    deviations = _collect(
        players,
        lambda i: best_response_value(ig, profile, i, reachable_only=True)[ig.initial],
        jobs,
    )
    verdict = NeVerdict(deviations == payoff, payoff, deviations, thresholds.contains(payoff))
    log_to_file(log_file, f"[NE] stationary profile: equilibrium={verdict.is_equilibrium} "
                          f"thresholds_met={verdict.thresholds_met}")
    return verdict


def verify_finite_state_ne(ig: InitializedGame, profile: FiniteStateProfile,
                           thresholds: Optional[Thresholds] = None,
                           cap: int = DEFAULT_MEMORY_CAP, jobs: int = 1,
                           log_file: Optional[Path] = None) -> NeVerdict:
    """Check whether a finite-state profile is a Nash equilibrium

    Each deviator faces the MDP obtained from the product of the game with
    the other players' memories; her own memory is dropped, so she may use
    any strategy.

    Args:
        ig: Initialized game
        profile: Finite-state profile
        thresholds: Payoff bounds (default: unconstrained)
        cap: Product-size cap
        jobs: Worker threads for the per-player products
        log_file: Optional log file

    Returns:
        NeVerdict

    Raises:
        MemoryBlowup: If some product exceeds cap
    """
    players = ig.game.num_players
    thresholds = thresholds or Thresholds.unconstrained(players)
    thresholds.check_players(players)
    payoff = finite_state_payoff(ig, profile, cap=cap, log_file=log_file)

    def deviation(i: int) -> Fraction:
        product = build_product(ig, profile, free_player=i, cap=cap, log_file=log_file)
        values = best_response_value(product.ig, StationaryProfile({}), i, reachable_only=True)
        return values[product.ig.initial]

    deviations = _collect(players, deviation, jobs)
    verdict = NeVerdict(deviations == payoff, payoff, deviations, thresholds.contains(payoff))
    log_to_file(log_file, f"[NE] finite-state profile: equilibrium={verdict.is_equilibrium} "
                          f"thresholds_met={verdict.thresholds_met}")
    return verdict
