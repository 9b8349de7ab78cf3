#!/usr/bin/env python3
"""
SqrtSum Gadget Game

A SqrtSum instance (d_1..d_n; k) asks whether Σ√d_i ≥ k. The generated
four-player game has a stationary equilibrium in which player 0 wins almost
surely iff the answer is yes.

The edge label of the branch into the i-th gadget copy is
(4d²−d_i)/(4d²·n); with the 1/(4dn) exit this is the only reading under
which the branch probabilities of v1 sum to one.
"""

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt
from typing import Optional, Tuple

from src.core import SsmgError
from src.reductions.errors import InstanceError
from src.ssmg.desugar import DEFAULT_MAX_BRANCHES, desugar_initialized
from src.ssmg.game import GameBuilder, InitializedGame


SQRTSUM_PLAYERS = ("0", "1", "2", "3")


class DomainError(SsmgError):
    """Raised when gp_max_payoff is asked about p outside [1/2, 1)."""
    pass


@dataclass(frozen=True)
class SqrtSumInstance:
    d: Tuple[int, ...]
    k: int

    def __post_init__(self):
        if not self.d:
            raise InstanceError("instance needs at least one d_i")
        if any(x <= 0 for x in self.d):
            raise InstanceError(f"every d_i must be positive, got {list(self.d)}")
        if not 0 <= self.k <= sum(self.d):
            raise InstanceError(f"k = {self.k} must lie in [0, {sum(self.d)}]")

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def total(self) -> int:
        return sum(self.d)

    def p(self, i: int) -> Fraction:
        """Gadget parameter 1 − d_i/(2d²) of the i-th copy (0-based)."""
        return 1 - Fraction(self.d[i], 2 * self.total ** 2)

    def branch_probability(self, i: int) -> Fraction:
        d = self.total
        return Fraction(4 * d * d - self.d[i], 4 * d * d * self.n)

    @property
    def exit_probability(self) -> Fraction:
        return Fraction(1, 4 * self.total * self.n)

    @property
    def threshold(self) -> Fraction:
        """Player 3's exit payoff (2k+1)/(8dn) at v0."""
        return Fraction(2 * self.k + 1, 8 * self.total * self.n)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.d) + f" ; {self.k}"


def parse_sqrtsum(text: str) -> SqrtSumInstance:
    """Parse "d1 d2 … dn ; k"."""
    match = re.fullmatch(r"\s*([\d\s]+?)\s*;\s*(\d+)\s*", text)
    if match is None or not match.group(1).strip():
        raise InstanceError(f"expected 'd1 d2 ... dn ; k', got {text.strip()!r}")
    return SqrtSumInstance(tuple(int(x) for x in match.group(1).split()), int(match.group(2)))


def _add_gadget(builder: GameBuilder, prefix: str, p: Fraction) -> str:
    """Add one copy of the cycle gadget; returns its entry vertex."""
    s, a, s1, u, b, s2 = (f"{prefix}.{part}" for part in ("s", "a", "s1", "u", "b", "s2"))
    builder.add_vertex(s, owner="1")
    builder.add_vertex(a)
    builder.add_vertex(s1, owner="0")
    builder.add_vertex(u, owner="2")
    builder.add_vertex(b)
    builder.add_vertex(s2, owner="0")
    builder.add_payoff_terminal(f"{s}.exit", {"0": 1, "1": Fraction(1, 2)})
    builder.add_payoff_terminal(f"{a}.exit", {"0": 1, "3": 1})
    builder.add_payoff_terminal(f"{s1}.exit", {"0": 1, "1": 1})
    builder.add_payoff_terminal(f"{u}.exit", {"0": 1, "2": Fraction(1, 2)})
    builder.add_payoff_terminal(f"{b}.exit", {"0": 1})
    builder.add_payoff_terminal(f"{s2}.exit", {"0": 1, "2": 1})

    builder.add_edge(s, a)
    builder.add_edge(s, f"{s}.exit")
    builder.add_edge(a, s1, p)
    builder.add_edge(a, f"{a}.exit", 1 - p)
    builder.add_edge(s1, u)
    builder.add_edge(s1, f"{s1}.exit")
    builder.add_edge(u, b)
    builder.add_edge(u, f"{u}.exit")
    builder.add_edge(b, s2, p)
    builder.add_edge(b, f"{b}.exit", 1 - p)
    builder.add_edge(s2, s)
    builder.add_edge(s2, f"{s2}.exit")
    return s


def gadget_game(p: Fraction) -> InitializedGame:
    """The cycle gadget on its own, started at its entry vertex."""
    if not Fraction(1, 2) <= p < 1:
        raise DomainError(f"p = {p} outside [1/2, 1)")
    builder = GameBuilder(SQRTSUM_PLAYERS)
    entry = _add_gadget(builder, "g", Fraction(p))
    return desugar_initialized(builder.build_initialized(entry))


def gen_sqrtsum_game(inst: SqrtSumInstance,
                     max_branches: int = DEFAULT_MAX_BRANCHES) -> InitializedGame:
    """Four-player game of a SqrtSum instance

    Args:
        inst: SqrtSum instance
        max_branches: Largest lottery the payoff desugaring may create

    Returns:
        Desugared initialized game with initial vertex "v0" (player 3)
    """
    builder = GameBuilder(SQRTSUM_PLAYERS)
    builder.add_vertex("v0", owner="3")
    builder.add_vertex("v1")
    builder.add_payoff_terminal("v0.exit", {"3": inst.threshold})
    builder.add_payoff_terminal("v1.exit", {"0": 1})
    builder.add_edge("v0", "v1")
    builder.add_edge("v0", "v0.exit")
    builder.add_edge("v1", "v1.exit", inst.exit_probability)
    for i in range(inst.n):
        entry = _add_gadget(builder, f"g{i + 1}", inst.p(i))
        builder.add_edge("v1", entry, inst.branch_probability(i))
    return desugar_initialized(builder.build_initialized("v0"), max_branches)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """√q when q is the square of a rational, else None."""
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


@dataclass(frozen=True)
class GpMaximum:
    """Maximal player-3 payoff in a stationary equilibrium of the gadget.

    `value` and `x` carry `precision` significant digits and are off by at
    most `error_bound`; `exact_value`/`exact_x` are set when √(2−2p) is rational.
    """
    p: Fraction
    value: Decimal
    x: Decimal
    error_bound: Decimal
    exact_value: Optional[Fraction] = None
    exact_x: Optional[Fraction] = None

    @property
    def is_exact(self) -> bool:
        return self.exact_value is not None


def gp_max_payoff(p: Fraction, precision: int = 50) -> GpMaximum:
    """Closed form (√(2−2p) − p + 1)/(2p + 2) and its optimiser x = (1 − √(2−2p))/p

    Args:
        p: Gadget parameter in [1/2, 1)
        precision: Significant decimal digits of the real-valued result

    Raises:
        DomainError: p outside [1/2, 1)
    """
    p = Fraction(p)
    if not Fraction(1, 2) <= p < 1:
        raise DomainError(f"p = {p} outside [1/2, 1)")
    root = _rational_sqrt(2 - 2 * p)
    if root is not None:
        exact_value = (root - p + 1) / (2 * p + 2)
        exact_x = (1 - root) / p
        with localcontext() as ctx:
            ctx.prec = precision
            value = Decimal(exact_value.numerator) / Decimal(exact_value.denominator)
            x = Decimal(exact_x.numerator) / Decimal(exact_x.denominator)
        return GpMaximum(p, value, x, Decimal(10) ** -precision, exact_value, exact_x)

    with localcontext() as ctx:
        ctx.prec = precision + 10
        dp = Decimal(p.numerator) / Decimal(p.denominator)
        s = (2 - 2 * dp).sqrt()
        value = (s - dp + 1) / (2 * dp + 2)
        x = (1 - s) / dp
        ctx.prec = precision
        value, x = +value, +x
    return GpMaximum(p, value, x, Decimal(10) ** -precision)


@dataclass(frozen=True)
class SqrtSumCheck:
    """Certified comparison of Σ√d_i/(4dn) + 1/(8dn) against (2k+1)/(8dn).

    lhs_lower <= lhs <= lhs_upper; the two coincide when every d_i is a
    perfect square.
    """
    lhs_lower: Fraction
    lhs_upper: Fraction
    rhs: Fraction
    verdict: bool
    equality: bool
    digits: int


def sqrtsum_threshold_check(inst: SqrtSumInstance, start_digits: int = 16) -> SqrtSumCheck:
    """Decide Σ√d_i ≥ k by interval refinement

    Each √d_i is enclosed in [⌊√(d_i·10^2e)⌋, ⌊√(d_i·10^2e)⌋ + 1]/10^e,
    doubling e until the enclosure of the sum clears k. When every d_i is a
    perfect square the enclosure is a point and equality is decided exactly;
    otherwise the sum is irrational and the loop terminates.
    """
    d, n = inst.total, inst.n
    scale = Fraction(1, 4 * d * n)
    offset = Fraction(1, 8 * d * n)
    digits = start_digits
    while True:
        unit = 10 ** digits
        lower = Fraction(0)
        upper = Fraction(0)
        for di in inst.d:
            r = isqrt(di * unit * unit)
            lower += Fraction(r, unit)
            upper += Fraction(r if r * r == di * unit * unit else r + 1, unit)
        exact = lower == upper
        if lower >= inst.k or upper < inst.k or exact:
            verdict = lower >= inst.k
            return SqrtSumCheck(
                lhs_lower=lower * scale + offset,
                lhs_upper=upper * scale + offset,
                rhs=inst.threshold,
                verdict=verdict,
                equality=exact and lower == inst.k,
                digits=digits,
            )
        digits *= 2
