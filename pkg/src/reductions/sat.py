#!/usr/bin/env python3
"""
SAT Gadget Game

Builds the two-player game of a CNF formula: a satisfying assignment
corresponds to a positional equilibrium with payoff (1, 1/2), and no
stationary equilibrium with that payoff exists for unsatisfiable formulas.

Vertex layout (n variables, m clauses):
    v0                stochastic start
    x{i}, nx{i}       literal vertices of player 0, each with a gadget
                      {L}.top (player 1), {L}.keep, {L}.bot (stochastic)
                      and terminals {L}.leave (0,1), {L}.win (1,1), {L}.lose (1,0)
    phi               stochastic clause selector
    c{j}              clause vertices of player 1
    v0.exit (1,0), phi.win (1,1)
"""

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from src.analysis.equilibrium import Thresholds
from src.analysis.profiles import PositionalProfile
from src.reductions.errors import InstanceError
from src.ssmg.desugar import desugar_initialized
from src.ssmg.game import GameBuilder, InitializedGame


SAT_PLAYERS = ("0", "1")


@dataclass(frozen=True)
class CnfFormula:
    """Clauses of signed variable indices (i for X_i, -i for ¬X_i)."""
    variables: int
    clauses: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        if self.variables < 0:
            raise InstanceError(f"negative variable count {self.variables}")
        for j, clause in enumerate(self.clauses, start=1):
            if not clause:
                raise InstanceError(f"clause {j} is empty")
            for literal in clause:
                if literal == 0 or abs(literal) > self.variables:
                    raise InstanceError(f"clause {j} mentions literal {literal} outside 1..{self.variables}")

    @classmethod
    def of(cls, variables: int, clauses: Iterable[Iterable[int]]) -> 'CnfFormula':
        return cls(variables, tuple(frozenset(c) for c in clauses))

    def satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        return all(
            any(assignment.get(abs(lit), False) == (lit > 0) for lit in clause)
            for clause in self.clauses
        )

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variables} {len(self.clauses)}"]
        for clause in self.clauses:
            lines.append(" ".join(str(lit) for lit in sorted(clause, key=_literal_key)) + " 0")
        return "\n".join(lines) + "\n"


def _literal_key(literal: int) -> Tuple[int, int]:
    # variable order, positive literal first
    return abs(literal), 0 if literal > 0 else 1


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text

    Comment lines ("c ...") are skipped and a "%" line ends the clause list.

    Raises:
        InstanceError: Missing or malformed header, bad literal, unterminated
            clause, or a clause count that disagrees with the header
    """
    header: Optional[Tuple[int, int]] = None
    clauses: List[List[int]] = []
    current: List[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            match = re.fullmatch(r"p\s+cnf\s+(\d+)\s+(\d+)", line)
            if header is not None or match is None:
                raise InstanceError(f"line {number}: bad problem line {line!r}")
            header = (int(match.group(1)), int(match.group(2)))
            continue
        if header is None:
            raise InstanceError(f"line {number}: clause before the problem line")
        for token in line.split():
            try:
                literal = int(token)
            except ValueError:
                raise InstanceError(f"line {number}: {token!r} is not a literal") from None
            if literal == 0:
                clauses.append(current)
                current = []
            else:
                current.append(literal)
    if header is None:
        raise InstanceError("missing problem line 'p cnf <vars> <clauses>'")
    if current:
        raise InstanceError("last clause is not terminated by 0")
    variables, count = header
    if count != len(clauses):
        raise InstanceError(f"header announces {count} clauses, found {len(clauses)}")
    return CnfFormula.of(variables, clauses)


def satisfying_assignment(cnf: CnfFormula) -> Optional[Dict[int, bool]]:
    """First satisfying assignment in lexicographic order (False before True), by brute force."""
    for values in itertools.product((False, True), repeat=cnf.variables):
        assignment = {i + 1: value for i, value in enumerate(values)}
        if cnf.satisfied_by(assignment):
            return assignment
    return None


def is_satisfiable(cnf: CnfFormula) -> bool:
    return satisfying_assignment(cnf) is not None


def literal_vertex(literal: int) -> str:
    return f"x{literal}" if literal > 0 else f"nx{-literal}"


def clause_vertex(j: int) -> str:
    return f"c{j}"


def sat_thresholds() -> Thresholds:
    """The payoff window (1, 1/2) the reduction is stated for."""
    return Thresholds.of((1, Fraction(1, 2)), (1, Fraction(1, 2)))


def _add_literal_gadget(builder: GameBuilder, v: str) -> None:
    top, keep, bot = f"{v}.top", f"{v}.keep", f"{v}.bot"
    builder.add_vertex(v, owner="0")
    builder.add_vertex(top, owner="1")
    builder.add_vertex(keep)
    builder.add_vertex(bot)
    builder.add_payoff_terminal(f"{v}.leave", {"1": 1})
    builder.add_payoff_terminal(f"{v}.win", {"0": 1, "1": 1})
    builder.add_payoff_terminal(f"{v}.lose", {"0": 1})
    builder.add_edge(v, top)
    builder.add_edge(v, bot)
    builder.add_edge(top, keep)
    builder.add_edge(top, f"{v}.leave")
    half = Fraction(1, 2)
    builder.add_edge(keep, v, half)
    builder.add_edge(keep, f"{v}.win", half)
    builder.add_edge(bot, v, half)
    builder.add_edge(bot, f"{v}.lose", half)


def gen_sat_game(cnf: CnfFormula) -> InitializedGame:
    """Two-player gadget game of a CNF formula

    Args:
        cnf: Formula with at least one variable and one clause

    Returns:
        Desugared initialized game with initial vertex "v0"

    Raises:
        InstanceError: Formula without clauses or variables
    """
    if not cnf.clauses:
        raise InstanceError("formula has no clauses")
    if cnf.variables == 0:
        raise InstanceError("formula has no variables")

    n, m = cnf.variables, len(cnf.clauses)
    builder = GameBuilder(SAT_PLAYERS)
    builder.add_vertex("v0")
    for i in range(1, n + 1):
        _add_literal_gadget(builder, literal_vertex(i))
        _add_literal_gadget(builder, literal_vertex(-i))
    builder.add_vertex("phi")
    for j in range(1, m + 1):
        builder.add_vertex(clause_vertex(j), owner="1")
    builder.add_payoff_terminal("v0.exit", {"0": 1})
    builder.add_payoff_terminal("phi.win", {"0": 1, "1": 1})

    for i in range(1, n + 1):
        share = Fraction(1, 2 ** (i + 1))
        builder.add_edge("v0", literal_vertex(i), share)
        builder.add_edge("v0", literal_vertex(-i), share)
    builder.add_edge("v0", "phi", Fraction(1, 2 ** (n + 1)))
    builder.add_edge("v0", "v0.exit", Fraction(1, 2 ** (n + 1)))

    for j, clause in enumerate(cnf.clauses, start=1):
        builder.add_edge("phi", clause_vertex(j), Fraction(1, m + 1))
        for literal in sorted(clause, key=_literal_key):
            builder.add_edge(clause_vertex(j), literal_vertex(literal))
    builder.add_edge("phi", "phi.win", Fraction(1, m + 1))

    return desugar_initialized(builder.build_initialized("v0"))


def sat_equilibrium_profile(cnf: CnfFormula, assignment: Mapping[int, bool]) -> PositionalProfile:
    """Positional equilibrium of gen_sat_game(cnf) induced by a satisfying assignment

    Player 0 moves to the top vertex exactly at true literals; player 1
    stays at every top vertex and sends each clause to its first true
    literal in (variable, positive-first) order.

    Raises:
        InstanceError: Assignment misses a variable or does not satisfy cnf
    """
    missing = [i for i in range(1, cnf.variables + 1) if i not in assignment]
    if missing:
        raise InstanceError(f"assignment misses variables {missing}")
    if not cnf.satisfied_by(assignment):
        raise InstanceError("assignment does not satisfy the formula")

    choices: Dict[str, str] = {}
    for i in range(1, cnf.variables + 1):
        for literal in (i, -i):
            v = literal_vertex(literal)
            true = assignment[i] == (literal > 0)
            choices[v] = f"{v}.top" if true else f"{v}.bot"
            choices[f"{v}.top"] = f"{v}.keep"
    for j, clause in enumerate(cnf.clauses, start=1):
        chosen = next(
            lit for lit in sorted(clause, key=_literal_key) if assignment[abs(lit)] == (lit > 0)
        )
        choices[clause_vertex(j)] = literal_vertex(chosen)
    return PositionalProfile(choices)


def cnf_corpus(max_variables: int = 3, max_clauses: int = 3, max_width: int = 2) -> List[CnfFormula]:
    """Every CNF up to the given sizes whose clauses are distinct, sorted literal sets."""
    corpus = []
    for n in range(1, max_variables + 1):
        literals = [lit for i in range(1, n + 1) for lit in (i, -i)]
        possible = [
            frozenset(c)
            for width in range(1, max_width + 1)
            for c in itertools.combinations(literals, width)
            if len({abs(lit) for lit in c}) == width
        ]
        for m in range(1, max_clauses + 1):
            for clauses in itertools.combinations(possible, m):
                used = {abs(lit) for c in clauses for lit in c}
                if used == set(range(1, n + 1)):
                    corpus.append(CnfFormula(n, tuple(clauses)))
    return corpus
