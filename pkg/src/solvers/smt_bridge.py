#!/usr/bin/env python3
"""
External Solver Bridge

Runs an SMT-LIB solver as a subprocess. The command is a template such as
"z3 -smt2 {file}"; "{file}" is replaced with the formula path (or the path
is appended when the template has no placeholder).
"""

import shlex
import shutil
import subprocess
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

from src.core import SsmgError, log_to_file


class SolverUnavailable(SsmgError):
    """Raised when no solver command is configured or its binary is missing."""
    pass


class SolverError(SsmgError):
    """Raised when the solver answers "unknown" or produces unreadable output."""
    pass


@dataclass(frozen=True)
class SolverAnswer:
    """A decided solver run; model values are rational where the solver printed them so."""
    satisfiable: bool
    model: Dict[str, Fraction] = field(default_factory=dict)
    irrational: Set[str] = field(default_factory=set)
    raw: str = ""


SExpr = Union[str, List['SExpr']]


def _tokenize(text: str) -> List[str]:
    tokens: List[str] = []
    k = 0
    while k < len(text):
        ch = text[k]
        if ch.isspace():
            k += 1
        elif ch in "()":
            tokens.append(ch)
            k += 1
        elif ch == ";":
            while k < len(text) and text[k] != "\n":
                k += 1
        elif ch == "|":
            end = text.index("|", k + 1)
            tokens.append(text[k + 1:end])
            k = end + 1
        elif ch == '"':
            end = text.index('"', k + 1)
            tokens.append(text[k:end + 1])
            k = end + 1
        else:
            start = k
            while k < len(text) and not text[k].isspace() and text[k] not in "();":
                k += 1
            tokens.append(text[start:k])
    return tokens


def parse_sexprs(text: str) -> List[SExpr]:
    """Parse a sequence of s-expressions."""
    try:
        tokens = _tokenize(text)
    except ValueError as e:
        raise SolverError(f"unterminated quoted symbol in solver output: {e}") from e
    stack: List[List[SExpr]] = [[]]
    for token in tokens:
        if token == "(":
            stack.append([])
        elif token == ")":
            if len(stack) == 1:
                raise SolverError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(token)
    if len(stack) != 1:
        raise SolverError("unbalanced '(' in solver output")
    return stack[0]


def _numeral(token: str) -> Optional[Fraction]:
    if token.endswith("?"):
        return None
    try:
        return Fraction(token)
    except ValueError:
        return None


def model_value(expr: SExpr) -> Optional[Fraction]:
    """Rational value of a model term, or None for algebraic/unknown terms."""
    if isinstance(expr, str):
        return _numeral(expr)
    if not expr or not isinstance(expr[0], str):
        return None
    head, args = expr[0], [model_value(a) for a in expr[1:]]
    if any(a is None for a in args) or not args:
        return None
    if head == "/" and len(args) == 2 and args[1] != 0:
        return args[0] / args[1]
    if head == "-":
        return -args[0] if len(args) == 1 else args[0] - sum(args[1:], Fraction(0))
    if head == "+":
        return sum(args, Fraction(0))
    if head == "*":
        result = Fraction(1)
        for a in args:
            result *= a
        return result
    return None


def parse_model(text: str) -> Tuple[Dict[str, Fraction], Set[str]]:
    """Extract (define-fun name () Real value) entries

    Returns:
        (rational values, names whose value is not a rational literal)
    """
    values: Dict[str, Fraction] = {}
    irrational: Set[str] = set()

    def visit(node: SExpr) -> None:
        if not isinstance(node, list):
            return
        if len(node) == 5 and node[0] == "define-fun" and node[2] == []:
            value = model_value(node[4])
            if value is None:
                irrational.add(node[1])
            else:
                values[node[1]] = value
            return
        for child in node:
            visit(child)

    for node in parse_sexprs(text):
        visit(node)
    return values, irrational


class SolverBridge:
    """Runs formula files through an external solver command."""

    def __init__(self, command: str, timeout_seconds: int = 60, log_file: Optional[Path] = None):
        self.command = command
        self.timeout_seconds = timeout_seconds
        self.log_file = log_file

    def argv(self, path: Path) -> List[str]:
        parts = shlex.split(self.command)
        if not parts:
            raise SolverUnavailable("no solver command configured")
        if any("{file}" in p for p in parts):
            return [p.replace("{file}", str(path)) for p in parts]
        return parts + [str(path)]

    def available(self) -> bool:
        parts = shlex.split(self.command) if self.command else []
        return bool(parts) and shutil.which(parts[0]) is not None

    def check(self, path: Path) -> SolverAnswer:
        """Run the solver on one formula file

        Raises:
            SolverUnavailable: Binary missing
            SolverError: "unknown", timeout, or unreadable output
        """
        argv = self.argv(path)
        if shutil.which(argv[0]) is None:
            raise SolverUnavailable(f"solver binary {argv[0]!r} not found on PATH")
        try:
            result = subprocess.run(
                argv,
                capture_output=True,
                text=True,
                encoding='utf-8',
                timeout=self.timeout_seconds,
            )
        except subprocess.TimeoutExpired as e:
            raise SolverError(f"solver timed out after {self.timeout_seconds}s on {path}") from e
        except OSError as e:
            raise SolverUnavailable(f"could not start solver: {e}") from e

        lines = [line.strip() for line in result.stdout.splitlines() if line.strip()]
        first = lines[0] if lines else ""
        log_to_file(self.log_file, f"[SolverBridge] {path.name}: {first or '<no output>'}")
        if first == "unsat":
            return SolverAnswer(False, raw=result.stdout)
        if first == "sat":
            model_text = result.stdout.split("sat", 1)[1]
            values, irrational = parse_model(model_text)
            return SolverAnswer(True, values, irrational, raw=result.stdout)
        if first == "unknown":
            raise SolverError(f"solver answered unknown on {path}")
        raise SolverError(f"unexpected solver output on {path}: {first or result.stderr.strip()!r}")
