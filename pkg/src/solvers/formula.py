#!/usr/bin/env python3
"""
Existential Real Arithmetic Formulas

Builds, for one support S, the conjunction that holds exactly for the
stationary equilibria with support S and payoff inside the thresholds:

    phi      alpha is a profile with support S (stochastic edges pinned)
    eta_i    z^i are the reach probabilities of F_i, pinned to 0 off R_i
    theta_i  r^i is a solution of the best-response constraints
    psi      r^i_v0 <= z^i_v0 and x_i <= z^i_v0 <= y_i

Variables exist only for edges; alpha on a non-edge is identically 0.
Formulas render as SMT-LIB 2 (QF_NRA) text and can be evaluated exactly
under a rational assignment.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.analysis.equilibrium import Thresholds
from src.core import SsmgError
from src.solvers.supports import Support, check_support, reach_sets
from src.ssmg.game import InitializedGame, require_pure


_SIMPLE_SYMBOL = re.compile(r"^[A-Za-z~!@$%^&*_\-+=<>.?/][A-Za-z0-9~!@$%^&*_\-+=<>.?/]*$")


class FormulaError(SsmgError):
    """Raised when a formula cannot be built (bad support, clashing names)."""
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Sum:
    terms: Tuple['Expr', ...]


@dataclass(frozen=True)
class Product:
    factors: Tuple['Expr', ...]


Expr = Union[Var, Const, Sum, Product]


@dataclass(frozen=True)
class Atom:
    """lhs op rhs with op one of <=, <, =."""
    op: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Assertion:
    group: str
    atom: Atom


def smt_symbol(name: str) -> str:
    """Render a symbol, quoting it when it is not a simple SMT-LIB symbol."""
    if _SIMPLE_SYMBOL.match(name):
        return name
    if "|" in name or "\\" in name:
        raise FormulaError(f"symbol {name!r} cannot be quoted")
    return f"|{name}|"


def render_constant(value: Fraction) -> str:
    value = Fraction(value)
    magnitude = abs(value)
    if magnitude.denominator == 1:
        text = str(magnitude.numerator)
    else:
        text = f"(/ {magnitude.numerator} {magnitude.denominator})"
    return f"(- {text})" if value < 0 else text


def render(expr: Expr) -> str:
    if isinstance(expr, Var):
        return smt_symbol(expr.name)
    if isinstance(expr, Const):
        return render_constant(expr.value)
    if isinstance(expr, Sum):
        if not expr.terms:
            return "0"
        if len(expr.terms) == 1:
            return render(expr.terms[0])
        return "(+ " + " ".join(render(t) for t in expr.terms) + ")"
    if isinstance(expr, Product):
        if len(expr.factors) == 1:
            return render(expr.factors[0])
        return "(* " + " ".join(render(f) for f in expr.factors) + ")"
    raise FormulaError(f"unknown expression {expr!r}")


def evaluate(expr: Expr, assignment: Mapping[str, Fraction]) -> Fraction:
    if isinstance(expr, Var):
        if expr.name not in assignment:
            raise FormulaError(f"no value for {expr.name!r}")
        return Fraction(assignment[expr.name])
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Sum):
        return sum((evaluate(t, assignment) for t in expr.terms), Fraction(0))
    if isinstance(expr, Product):
        result = Fraction(1)
        for f in expr.factors:
            result *= evaluate(f, assignment)
        return result
    raise FormulaError(f"unknown expression {expr!r}")


@dataclass(frozen=True)
class RealFormula:
    """Declared real variables and a conjunction of tagged atoms."""
    variables: Tuple[str, ...]
    assertions: Tuple[Assertion, ...]

    def to_smtlib(self) -> str:
        lines = ["(set-option :produce-models true)", "(set-logic QF_NRA)"]
        lines += [f"(declare-fun {smt_symbol(name)} () Real)" for name in self.variables]
        for assertion in self.assertions:
            atom = assertion.atom
            lines.append(f"(assert ({atom.op} {render(atom.lhs)} {render(atom.rhs)}))")
        lines += ["(check-sat)", "(get-model)"]
        return "\n".join(lines) + "\n"

    def holds(self, assignment: Mapping[str, Fraction], groups: Optional[Iterable[str]] = None) -> bool:
        """Evaluate the conjunction (optionally only some groups) exactly."""
        selected = None if groups is None else set(groups)
        for assertion in self.assertions:
            if selected is not None and assertion.group not in selected:
                continue
            atom = assertion.atom
            lhs, rhs = evaluate(atom.lhs, assignment), evaluate(atom.rhs, assignment)
            if atom.op == "<=" and not lhs <= rhs:
                return False
            if atom.op == "<" and not lhs < rhs:
                return False
            if atom.op == "=" and lhs != rhs:
                return False
        return True

    def used_variables(self) -> set:
        used = set()

        def walk(expr: Expr) -> None:
            if isinstance(expr, Var):
                used.add(expr.name)
            elif isinstance(expr, Sum):
                for t in expr.terms:
                    walk(t)
            elif isinstance(expr, Product):
                for f in expr.factors:
                    walk(f)

        for assertion in self.assertions:
            walk(assertion.atom.lhs)
            walk(assertion.atom.rhs)
        return used


def alpha_name(v: str, w: str) -> str:
    return f"alpha_{v}_{w}"


def z_name(i: int, v: str) -> str:
    return f"z_{i}_{v}"


def r_name(i: int, v: str) -> str:
    return f"r_{i}_{v}"


def _const(value) -> Const:
    return Const(Fraction(value))


def build_statne_formula(ig: InitializedGame, thresholds: Thresholds, support: Support) -> RealFormula:
    """The existential formula for stationary equilibria with a given support

    Args:
        ig: Initialized game
        thresholds: Payoff bounds
        support: Support to encode

    Returns:
        RealFormula (groups "phi", "eta", "theta", "psi")

    Raises:
        FormulaError: If the support is invalid or variable names clash
    """
    game = require_pure(ig.game)
    thresholds.check_players(game.num_players)
    try:
        check_support(game, support)
    except SsmgError as e:
        raise FormulaError(str(e)) from e
    reach = reach_sets(game, support)
    players = range(game.num_players)
    v0 = ig.initial

    variables: List[str] = []
    variables += [alpha_name(v, w) for v in game.vertices for w in game.successors(v)]
    variables += [z_name(i, v) for i in players for v in game.vertices]
    variables += [r_name(i, v) for i in players for v in game.vertices]
    if len(set(variables)) != len(variables):
        raise FormulaError("vertex ids produce clashing variable names")

    assertions: List[Assertion] = []

    def add(group: str, op: str, lhs: Expr, rhs: Expr) -> None:
        assertions.append(Assertion(group, Atom(op, lhs, rhs)))

    for v in game.vertices:
        edges = game.successors(v)
        alphas = [Var(alpha_name(v, w)) for w in edges]
        for a in alphas:
            add("phi", "<=", _const(0), a)
        add("phi", "=", Sum(tuple(alphas)), _const(1))
        if game.is_stochastic(v):
            for w, a in zip(edges, alphas):
                add("phi", "=", a, _const(game.prob(v, w)))
        for w, a in zip(edges, alphas):
            if (v, w) in support:
                add("phi", "<", _const(0), a)
            else:
                add("phi", "=", a, _const(0))

    def weighted(name, i: int, v: str) -> Sum:
        return Sum(tuple(
            Product((Var(alpha_name(v, w)), Var(name(i, w)))) for w in game.successors(v)
        ))

    for i in players:
        targets = game.win_set(i)
        for v in game.vertices:
            z = Var(z_name(i, v))
            if v in targets:
                add("eta", "=", z, _const(1))
            if v not in reach[i]:
                add("eta", "=", z, _const(0))
            if v not in targets:
                add("eta", "=", z, weighted(z_name, i, v))

    for i in players:
        targets = game.win_set(i)
        for v in game.vertices:
            r = Var(r_name(i, v))
            add("theta", "<=", _const(0), r)
            if v in targets:
                add("theta", "=", r, _const(1))
            if game.owner_of(v) == i:
                for w in game.successors(v):
                    add("theta", "<=", Var(r_name(i, w)), r)
            else:
                add("theta", "=", r, weighted(r_name, i, v))

    for i in players:
        z0 = Var(z_name(i, v0))
        add("psi", "<=", Var(r_name(i, v0)), z0)
        add("psi", "<=", _const(thresholds.x[i]), z0)
        add("psi", "<=", z0, _const(thresholds.y[i]))

    return RealFormula(tuple(variables), tuple(assertions))


def profile_assignment(ig: InitializedGame, choices: Mapping[str, Mapping[str, Fraction]]) -> Dict[str, Fraction]:
    """alpha values of a stationary profile (stochastic edges from the game)."""
    game = ig.game
    values = {}
    for v in game.vertices:
        for w in game.successors(v):
            if game.is_stochastic(v):
                values[alpha_name(v, w)] = game.prob(v, w)
            else:
                values[alpha_name(v, w)] = Fraction(choices.get(v, {}).get(w, 0))
    return values
