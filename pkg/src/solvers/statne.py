#!/usr/bin/env python3
"""
Stationary Equilibrium Search

Enumerates supports, writes one SMT-LIB formula per support and hands the
files to an external solver. Batches of `jobs` supports run concurrently;
answers are consumed in support order, so the verdict and the reported
support do not depend on scheduling.
"""

import concurrent.futures
import itertools
import tempfile
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.analysis.equilibrium import Thresholds, verify_ne
from src.analysis.profiles import StationaryProfile
from src.config.config_container import SolverConfig
from src.core import log_to_file
from src.solvers.formula import alpha_name, build_statne_formula
from src.solvers.results import SearchResult, SearchVerdict
from src.solvers.smt_bridge import SolverAnswer, SolverBridge
from src.solvers.supports import Support, count_supports, enumerate_supports
from src.ssmg.game import InitializedGame, require_pure


DEFAULT_STATNE_CAP = 2 ** 16


def witness_profile(ig: InitializedGame, answer: SolverAnswer) -> Optional[StationaryProfile]:
    """Stationary profile read off a model, or None if some owned edge is not rational."""
    game = ig.game
    choices: Dict[str, Dict] = {}
    for v in game.owned_vertices:
        dist = {}
        for w in game.successors(v):
            name = alpha_name(v, w)
            if name not in answer.model:
                return None
            dist[w] = answer.model[name]
        choices[v] = dist
    return StationaryProfile(choices)


def emit_formulas(ig: InitializedGame, thresholds: Thresholds, out_dir: Path,
                  cap: int = DEFAULT_STATNE_CAP) -> List[Path]:
    """Write the formula of every support to out_dir (support_00000.smt2, ...)."""
    game = require_pure(ig.game)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, support in enumerate(itertools.islice(enumerate_supports(game), cap)):
        path = out_dir / f"support_{k:05d}.smt2"
        path.write_text(build_statne_formula(ig, thresholds, support).to_smtlib(), encoding='utf-8')
        paths.append(path)
    return paths


def solve_statne(ig: InitializedGame, thresholds: Optional[Thresholds] = None,
                 solver: Optional[SolverConfig] = None,
                 cap: int = DEFAULT_STATNE_CAP,
                 log_file: Optional[Path] = None) -> SearchResult:
    """Search for a stationary Nash equilibrium through an external solver

    Args:
        ig: Initialized game
        thresholds: Payoff bounds (default: unconstrained)
        solver: Solver command, timeout, parallelism and file handling
        cap: Largest support count searched
        log_file: Optional log file

    Returns:
        SearchResult with verdict FOUND (support and, when rational, a
        verified witness), NOT_FOUND, CAP_EXCEEDED or SOLVER_UNAVAILABLE

    Raises:
        SolverError: The solver answered unknown or produced unreadable output
    """
    game = require_pure(ig.game)
    thresholds = thresholds or Thresholds.unconstrained(game.num_players)
    thresholds.check_players(game.num_players)
    solver = solver or SolverConfig()
    total = count_supports(game)
    if total > cap:
        log_to_file(log_file, f"[StatNE] {total} supports exceed cap {cap}")
        return SearchResult(SearchVerdict.CAP_EXCEEDED, detail=f"{total} supports exceed cap {cap}")

    bridge = SolverBridge(solver.resolved_command(), solver.timeout_seconds, log_file)
    if not bridge.available():
        log_to_file(log_file, f"[StatNE] solver unavailable: {bridge.command!r}")
        return SearchResult(SearchVerdict.SOLVER_UNAVAILABLE,
                            detail=f"solver command {bridge.command!r} is not runnable")

    jobs = max(1, solver.jobs)
    log_to_file(log_file, f"[StatNE] {total} supports, {jobs} solver process(es)")
    with tempfile.TemporaryDirectory(prefix="ssmg-statne-") as scratch:
        out_dir = Path(solver.emit_dir) if solver.emit_dir else Path(scratch)
        out_dir.mkdir(parents=True, exist_ok=True)
        supports = enumerate_supports(game)
        index = 0
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
            while True:
                batch: List[Tuple[int, Support, Path]] = []
                for support in itertools.islice(supports, jobs):
                    path = out_dir / f"support_{index:05d}.smt2"
                    path.write_text(build_statne_formula(ig, thresholds, support).to_smtlib(), encoding='utf-8')
                    batch.append((index, support, path))
                    index += 1
                if not batch:
                    break
                futures = [executor.submit(bridge.check, path) for _, _, path in batch]
                answers = [f.result() for f in futures]
                for (k, support, path), answer in zip(batch, answers):
                    if not solver.keep_files and not solver.emit_dir:
                        path.unlink(missing_ok=True)
                    if answer.satisfiable:
                        return _found(ig, thresholds, support, answer, k + 1, log_file)

    log_to_file(log_file, f"[StatNE] no satisfiable support among {total}")
    return SearchResult(SearchVerdict.NOT_FOUND, explored=total)


def _found(ig: InitializedGame, thresholds: Thresholds, support: Support,
           answer: SolverAnswer, explored: int, log_file: Optional[Path]) -> SearchResult:
    witness = None if answer.irrational else witness_profile(ig, answer)
    verified = None
    detail = ""
    if witness is None:
        detail = "witness not rational; round-trip check skipped"
    else:
        verdict = verify_ne(ig, witness, thresholds)
        verified = verdict.accepted
        if not verified:
            detail = "solver witness failed the exact equilibrium check"
    log_to_file(log_file, f"[StatNE] satisfiable support #{explored - 1}; witness verified={verified}")
    return SearchResult(
        SearchVerdict.FOUND,
        support=support,
        witness=witness,
        witness_verified=verified,
        payoff=None if witness is None else verdict.payoff,
        explored=explored,
        detail=detail,
    )
