#!/usr/bin/env python3
"""
Search Results

Verdict values shared by the positional and stationary searches.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, Optional, Tuple

from src.analysis.profiles import PositionalProfile, StationaryProfile


class SearchVerdict(Enum):
    FOUND = "found"
    NOT_FOUND = "not-found"
    CAP_EXCEEDED = "cap-exceeded"
    SOLVER_UNAVAILABLE = "solver-unavailable"


@dataclass(frozen=True)
class SearchResult:
    """Outcome of an equilibrium search.

    `explored` counts positional profiles checked or supports dispatched.
    `witness_verified` is None when no rational witness was available.
    """
    verdict: SearchVerdict
    profile: Optional[PositionalProfile] = None
    payoff: Optional[Tuple[Fraction, ...]] = None
    support: Optional[FrozenSet[Tuple[str, str]]] = None
    witness: Optional[StationaryProfile] = None
    witness_verified: Optional[bool] = None
    explored: int = 0
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.verdict is SearchVerdict.FOUND
