#!/usr/bin/env python3
"""
Positional Equilibrium Search

Exhaustive depth-first enumeration of positional profiles in lexicographic
(vertex order, successor order) order. Partial profiles are pruned with
exact payoff bounds: unassigned vertices reachable from v0 are treated as
losing (lower bound) or winning (upper bound) for each player, so pruning
never discards a completion that meets the thresholds.
"""

from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Dict, List, Optional

from src.analysis.equilibrium import Thresholds, verify_ne
from src.analysis.markov import forward_closure, reach_probabilities
from src.analysis.profiles import PositionalProfile
from src.core import log_to_file
from src.solvers.results import SearchResult, SearchVerdict
from src.ssmg.game import InitializedGame, require_pure


DEFAULT_POSNE_CAP = 2 ** 22


def count_positional_profiles(ig: InitializedGame) -> int:
    game = ig.game
    return prod(len(game.successors(v)) for v in game.owned_vertices)


class _PositionalSearch:
    """Depth-first search state for one solve_posne call."""

    def __init__(self, ig: InitializedGame, thresholds: Thresholds, jobs: int,
                 log_file: Optional[Path]):
        self.ig = ig
        self.game = ig.game
        self.thresholds = thresholds
        self.jobs = jobs
        self.log_file = log_file
        self.owned = list(self.game.owned_vertices)
        self.rows: Dict[str, Dict[str, Fraction]] = {
            v: dict(self.game.row(v)) for v in self.game.vertices if self.game.is_stochastic(v)
        }
        self.assignment: Dict[str, str] = {}
        self.checked = 0
        self.pruned = 0

    def _reached(self, v: str) -> bool:
        return v in forward_closure(self.rows, self.ig.initial)

    def _feasible(self) -> bool:
        """Whether some completion of the partial profile can meet the thresholds."""
        reached = forward_closure(self.rows, self.ig.initial)
        open_vertices = {v for v in self.owned if v not in self.assignment and v in reached}
        for i in range(self.game.num_players):
            targets = self.game.win_set(i)
            lower = reach_probabilities(self.rows, targets, self.game.vertices, self.ig.initial)[self.ig.initial]
            if lower > self.thresholds.y[i]:
                return False
            if open_vertices:
                upper = reach_probabilities(
                    self.rows, set(targets) | open_vertices, self.game.vertices, self.ig.initial
                )[self.ig.initial]
            else:
                upper = lower
            if upper < self.thresholds.x[i]:
                return False
        return True

    def _leaf(self) -> Optional[SearchResult]:
        self.checked += 1
        if self.checked % 10000 == 0:
            log_to_file(self.log_file, f"[PosNE] {self.checked} complete profiles checked")
        profile = PositionalProfile(dict(self.assignment))
        verdict = verify_ne(self.ig, profile, self.thresholds, jobs=self.jobs)
        if verdict.accepted:
            return SearchResult(
                SearchVerdict.FOUND,
                profile=profile,
                payoff=verdict.payoff,
                support=profile.to_stationary().support(),
                explored=self.checked,
            )
        return None

    def run(self, depth: int = 0) -> Optional[SearchResult]:
        if depth == len(self.owned):
            return self._leaf()
        v = self.owned[depth]
        for w in self.game.successors(v):
            self.assignment[v] = w
            self.rows[v] = {w: Fraction(1)}
            if self._reached(v) and not self._feasible():
                self.pruned += 1
                continue
            found = self.run(depth + 1)
            if found is not None:
                return found
        del self.assignment[v]
        del self.rows[v]
        return None


def solve_posne(ig: InitializedGame, thresholds: Optional[Thresholds] = None,
                cap: int = DEFAULT_POSNE_CAP, jobs: int = 1,
                log_file: Optional[Path] = None) -> SearchResult:
    """Search for a positional Nash equilibrium within payoff thresholds

    Args:
        ig: Initialized game
        thresholds: Payoff bounds (default: unconstrained)
        cap: Largest profile count searched
        jobs: Worker threads used by each equilibrium check
        log_file: Optional log file

    Returns:
        SearchResult with verdict FOUND (profile and payoff set), NOT_FOUND
        (exhaustive refutation) or CAP_EXCEEDED
    """
    game = require_pure(ig.game)
    thresholds = thresholds or Thresholds.unconstrained(game.num_players)
    thresholds.check_players(game.num_players)
    total = count_positional_profiles(ig)
    if total > cap:
        log_to_file(log_file, f"[PosNE] {total} profiles exceed cap {cap}")
        return SearchResult(SearchVerdict.CAP_EXCEEDED, explored=0,
                            detail=f"{total} positional profiles exceed cap {cap}")

    log_to_file(log_file, f"[PosNE] searching {total} profiles over {len(game.owned_vertices)} owned vertices")
    search = _PositionalSearch(ig, thresholds, jobs, log_file)
    if not search._feasible():
        log_to_file(log_file, "[PosNE] thresholds unreachable by any profile")
        return SearchResult(SearchVerdict.NOT_FOUND, explored=0, detail="thresholds unreachable")
    found = search.run()
    if found is not None:
        log_to_file(log_file, f"[PosNE] found equilibrium after {search.checked} complete profiles")
        return found
    log_to_file(log_file, f"[PosNE] no equilibrium; {search.checked} complete profiles, "
                          f"{search.pruned} subtrees pruned")
    return SearchResult(SearchVerdict.NOT_FOUND, explored=search.checked,
                        detail=f"{search.pruned} subtrees pruned by payoff bounds")
