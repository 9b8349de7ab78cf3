#!/usr/bin/env python3
"""
SSMG Command Line

Every analysis, search, generator and checker is a subcommand. Each run
prints one JSON report on stdout and a short human summary on stderr; the
exit code always matches the report's verdict:

    0  yes / success        1  no / not found
    2  usage or input error 3  cap exceeded
    4  external solver unavailable
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from rich.console import Console
from rich.table import Table

from src.analysis.best_response import best_response_strategy, best_response_value
from src.analysis.equilibrium import Thresholds, verify_finite_state_ne, verify_ne
from src.analysis.markov import stationary_payoff, terminal_distribution
from src.analysis.product import MemoryBlowup, build_product, finite_state_payoff
from src.analysis.profiles import (
    FiniteStateProfile,
    StationaryProfile,
    load_profile,
    save_profile,
)
from src.config.config_container import AnalysisConfig, ConfigContainer, SOLVER_CMD_ENV
from src.core import SsmgError, format_rational, log_to_file, parse_rational
from src.profiling import PerformanceProfiler
from src.reductions.bounded import bounded_payoff
from src.reductions.examples import EXAMPLE_NAMES, example_game
from src.reductions.sat import gen_sat_game, parse_dimacs, sat_equilibrium_profile, satisfying_assignment
from src.reductions.sqrtsum import gen_sqrtsum_game, gp_max_payoff, parse_sqrtsum, sqrtsum_threshold_check
from src.reductions.two_counter import (
    CounterCapExceeded,
    Label,
    gen_2cm_game,
    intended_2cm_profile,
    parse_machine,
    segment_probability,
)
from src.solvers.posne import solve_posne
from src.solvers.results import SearchResult, SearchVerdict
from src.solvers.smt_bridge import SolverUnavailable
from src.solvers.statne import solve_statne
from src.ssmg.game import InitializedGame
from src.ssmg.game_io import load, save
from src.ssmg.validation import validate
from src.version import get_current_version


EXIT_CODES = {
    "yes": 0,
    "no": 1,
    "error": 2,
    "cap-exceeded": 3,
    "solver-unavailable": 4,
}

_SEARCH_VERDICTS = {
    SearchVerdict.FOUND: "yes",
    SearchVerdict.NOT_FOUND: "no",
    SearchVerdict.CAP_EXCEEDED: "cap-exceeded",
    SearchVerdict.SOLVER_UNAVAILABLE: "solver-unavailable",
}


class UsageError(SsmgError):
    """Raised for flag combinations argparse cannot reject by itself."""
    pass


@dataclass
class RunReport:
    """The JSON document a run prints on stdout."""
    command: List[str]
    verdict: str = "yes"
    result: Dict[str, Any] = field(default_factory=dict)
    limits: Dict[str, Any] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "command": self.command,
            "verdict": self.verdict,
            "result": self.result,
            "limits": self.limits,
            "timing": self.timing,
        }
        if self.error is not None:
            data["error"] = self.error
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def _rationals(values: Sequence[Fraction]) -> List[str]:
    return [format_rational(Fraction(v)) for v in values]


def _parse_vector(text: str, where: str) -> List[Fraction]:
    return [parse_rational(part.strip(), where) for part in text.split(",")]


@dataclass
class RunContext:
    """Everything a command handler needs besides its own flags."""
    args: argparse.Namespace
    config: AnalysisConfig
    profiler: PerformanceProfiler
    report: RunReport

    @property
    def log_file(self) -> Optional[Path]:
        return self.config.log_path

    def load_game(self) -> InitializedGame:
        with self.profiler.measure("load"):
            return load(Path(self.args.game))

    def load_profile(self, ig: InitializedGame):
        with self.profiler.measure("load"):
            return load_profile(Path(self.args.profile), ig.game)

    def thresholds(self, ig: InitializedGame) -> Thresholds:
        n = ig.game.num_players
        if self.args.player0_wins:
            if self.args.x or self.args.y:
                raise UsageError("--player0-wins cannot be combined with --x/--y")
            return Thresholds.player0_wins(n)
        x = _parse_vector(self.args.x, "--x") if self.args.x else [Fraction(0)] * n
        y = _parse_vector(self.args.y, "--y") if self.args.y else [Fraction(1)] * n
        thresholds = Thresholds.of(x, y)
        thresholds.check_players(n)
        return thresholds


# ---------------------------------------------------------------------------
# Command handlers: each fills ctx.report.result and sets ctx.report.verdict
# ---------------------------------------------------------------------------

def cmd_validate(ctx: RunContext) -> None:
    with ctx.profiler.measure("load"):
        ig = load(Path(ctx.args.game), check=False)
    with ctx.profiler.measure("validate"):
        violations = validate(ig.game)
    ctx.report.result = {
        "vertices": len(ig.game.vertices),
        "players": list(ig.players),
        "violations": [
            {"kind": v.kind.value, "message": v.message, "vertex": v.vertex}
            for v in violations
        ],
    }
    ctx.report.verdict = "no" if violations else "yes"


def cmd_payoff(ctx: RunContext) -> None:
    ig = ctx.load_game()
    profile = ctx.load_profile(ig)
    with ctx.profiler.measure("payoff"):
        if isinstance(profile, FiniteStateProfile):
            payoff = finite_state_payoff(ig, profile, cap=ctx.config.limits.memory_cap, log_file=ctx.log_file)
            ctx.report.result = {"payoff": _rationals(payoff)}
        else:
            payoff = stationary_payoff(ig, profile)
            dist = terminal_distribution(ig, profile)
            ctx.report.result = {
                "payoff": _rationals(payoff),
                "terminals": {t: format_rational(p) for t, p in dist.masses.items() if p},
                "nontermination": format_rational(dist.nontermination),
            }


def cmd_best_response(ctx: RunContext) -> None:
    ig = ctx.load_game()
    profile = ctx.load_profile(ig)
    player = ig.game.player_index(ctx.args.player)
    with ctx.profiler.measure("best-response"):
        if isinstance(profile, FiniteStateProfile):
            product = build_product(ig, profile, free_player=player,
                                    cap=ctx.config.limits.memory_cap, log_file=ctx.log_file)
            values = best_response_value(product.ig, StationaryProfile({}), player)
            ctx.report.result = {"value": format_rational(values[product.ig.initial])}
        else:
            values = best_response_value(ig, profile, player)
            strategy = best_response_strategy(ig, profile, player, values)
            ctx.report.result = {
                "value": format_rational(values[ig.initial]),
                "values": {v: format_rational(x) for v, x in values.items()},
                "strategy": strategy,
            }
    ctx.report.result["player"] = ig.players[player]


def cmd_verify_ne(ctx: RunContext) -> None:
    ig = ctx.load_game()
    profile = ctx.load_profile(ig)
    thresholds = ctx.thresholds(ig)
    jobs = ctx.args.jobs or ctx.config.solver.jobs
    with ctx.profiler.measure("verify"):
        if isinstance(profile, FiniteStateProfile):
            verdict = verify_finite_state_ne(ig, profile, thresholds, cap=ctx.config.limits.memory_cap,
                                             jobs=jobs, log_file=ctx.log_file)
        else:
            verdict = verify_ne(ig, profile, thresholds, jobs=jobs, log_file=ctx.log_file)
    ctx.report.result = {
        "payoff": _rationals(verdict.payoff),
        "best_responses": _rationals(verdict.deviations),
        "is_equilibrium": verdict.is_equilibrium,
        "thresholds_met": verdict.thresholds_met,
        "profitable_deviators": [ig.players[i] for i in verdict.profitable_deviators],
    }
    ctx.report.verdict = "yes" if verdict.accepted else "no"


def _search_result(ctx: RunContext, ig: InitializedGame, result: SearchResult) -> None:
    ctx.report.verdict = _SEARCH_VERDICTS[result.verdict]
    data: Dict[str, Any] = {"explored": result.explored}
    if result.detail:
        data["detail"] = result.detail
    if result.profile is not None:
        data["profile"] = dict(result.profile.choices)
    if result.payoff is not None:
        data["payoff"] = _rationals(result.payoff)
    if result.support is not None:
        data["support"] = sorted([v, w] for v, w in result.support)
    if result.witness is not None:
        data["witness"] = {
            v: {w: format_rational(p) for w, p in dist.items()}
            for v, dist in result.witness.choices.items()
        }
    if result.verdict is SearchVerdict.FOUND and result.support is not None:
        data["witness_verified"] = result.witness_verified
    ctx.report.result = data


def cmd_solve_posne(ctx: RunContext) -> None:
    ig = ctx.load_game()
    thresholds = ctx.thresholds(ig)
    cap = ctx.args.cap or ctx.config.limits.posne_cap
    ctx.report.limits["cap"] = cap
    with ctx.profiler.measure("search"):
        result = solve_posne(ig, thresholds, cap=cap, jobs=ctx.args.jobs or ctx.config.solver.jobs,
                             log_file=ctx.log_file)
    _search_result(ctx, ig, result)


def cmd_solve_statne(ctx: RunContext) -> None:
    ig = ctx.load_game()
    thresholds = ctx.thresholds(ig)
    solver = ctx.config.solver
    if ctx.args.solver_cmd:
        solver.command = ctx.args.solver_cmd
    else:
        solver.command = solver.resolved_command()
    if ctx.args.jobs:
        solver.jobs = ctx.args.jobs
    if ctx.args.timeout:
        solver.timeout_seconds = ctx.args.timeout
    if ctx.args.emit_dir:
        solver.emit_dir = ctx.args.emit_dir
    if ctx.args.keep_files:
        solver.keep_files = True
    cap = ctx.args.cap or ctx.config.limits.statne_cap
    ctx.report.limits.update({"cap": cap, "solver": solver.command, "jobs": solver.jobs})
    with ctx.profiler.measure("search"):
        result = solve_statne(ig, thresholds, solver, cap=cap, log_file=ctx.log_file)
    _search_result(ctx, ig, result)


def _write_game(ctx: RunContext, ig: InitializedGame) -> None:
    out = Path(ctx.args.out)
    with ctx.profiler.measure("write"):
        save(ig, out)
    ctx.report.result.update({
        "out": str(out),
        "vertices": len(ig.game.vertices),
        "players": list(ig.players),
        "initial": ig.initial,
    })


def cmd_gen_sat(ctx: RunContext) -> None:
    cnf = parse_dimacs(Path(ctx.args.cnf).read_text(encoding='utf-8'))
    with ctx.profiler.measure("generate"):
        ig = gen_sat_game(cnf)
    _write_game(ctx, ig)
    assignment = satisfying_assignment(cnf)
    ctx.report.result["satisfiable"] = assignment is not None
    if ctx.args.profile_out and assignment is not None:
        save_profile(sat_equilibrium_profile(cnf, assignment), ig.game, Path(ctx.args.profile_out))
        ctx.report.result["profile_out"] = ctx.args.profile_out


def _sqrtsum_instance(ctx: RunContext):
    if ctx.args.instance_file:
        return parse_sqrtsum(Path(ctx.args.instance_file).read_text(encoding='utf-8'))
    if ctx.args.instance:
        return parse_sqrtsum(ctx.args.instance)
    raise UsageError("give --instance 'd1 ... dn ; k' or --instance-file")


def cmd_gen_sqrtsum(ctx: RunContext) -> None:
    inst = _sqrtsum_instance(ctx)
    with ctx.profiler.measure("generate"):
        ig = gen_sqrtsum_game(inst, max_branches=ctx.config.limits.desugar_max_branches)
    _write_game(ctx, ig)
    ctx.report.result["p"] = _rationals(inst.p(i) for i in range(inst.n))


def cmd_gen_2cm(ctx: RunContext) -> None:
    machine = parse_machine(Path(ctx.args.machine).read_text(encoding='utf-8'))
    with ctx.profiler.measure("generate"):
        ig = gen_2cm_game(machine)
    _write_game(ctx, ig)
    if ctx.args.profile_out:
        horizon = ctx.args.horizon or ctx.config.numerics.profile_horizon
        profile = intended_2cm_profile(machine, horizon, counter_cap=ctx.config.limits.counter_cap)
        save_profile(profile, ig.game, Path(ctx.args.profile_out))
        ctx.report.result.update({"profile_out": ctx.args.profile_out, "flags": list(profile.flags)})
        ctx.report.limits["profile_horizon"] = horizon


def cmd_sqrtsum_check(ctx: RunContext) -> None:
    inst = _sqrtsum_instance(ctx)
    with ctx.profiler.measure("check"):
        check = sqrtsum_threshold_check(inst)
    ctx.report.result = {
        "instance": str(inst),
        "lhs": [format_rational(check.lhs_lower), format_rational(check.lhs_upper)],
        "rhs": format_rational(check.rhs),
        "equality": check.equality,
        "digits": check.digits,
    }
    ctx.report.verdict = "yes" if check.verdict else "no"


def cmd_segment_check(ctx: RunContext) -> None:
    gamma = Label.parse(ctx.args.gamma)
    with ctx.profiler.measure("check"):
        p = segment_probability(gamma, ctx.args.c, ctx.args.c_next, counter=ctx.args.counter)
    ctx.report.result = {
        "gamma": str(gamma),
        "counter": ctx.args.counter,
        "probability": format_rational(p),
    }
    ctx.report.verdict = "yes" if p == Fraction(1, 4) else "no"


def cmd_bounded_payoff(ctx: RunContext) -> None:
    ig = ctx.load_game()
    profile = ctx.load_profile(ig)
    if isinstance(profile, StationaryProfile):
        raise UsageError("bounded-payoff needs a positional or finite-state profile")
    horizon = ctx.args.horizon if ctx.args.horizon is not None else ctx.config.numerics.horizon
    ctx.report.limits["horizon"] = horizon
    with ctx.profiler.measure("explore"):
        bounds = bounded_payoff(ig, profile, horizon, log_file=ctx.log_file)
    ctx.report.result = {
        "bounds": {
            ig.players[i]: [format_rational(b.lower), format_rational(b.upper)]
            for i, b in enumerate(bounds)
        },
        "open_mass": format_rational(bounds[0].width) if bounds else "0",
    }


def cmd_example(ctx: RunContext) -> None:
    horizon = ctx.args.horizon or ctx.config.numerics.profile_horizon
    example = example_game(ctx.args.name, profile_horizon=horizon)
    _write_game(ctx, example.ig)
    ctx.report.result["profiles"] = sorted(example.profiles)
    if ctx.args.profile_out:
        name = ctx.args.profile_name or next(iter(example.profiles))
        if name not in example.profiles:
            raise UsageError(f"example {example.name!r} documents profiles {sorted(example.profiles)}")
        save_profile(example.profiles[name], example.ig.game, Path(ctx.args.profile_out))
        ctx.report.result["profile_out"] = ctx.args.profile_out


def cmd_gp_max_payoff(ctx: RunContext) -> None:
    precision = ctx.args.precision or ctx.config.numerics.precision
    with ctx.profiler.measure("evaluate"):
        best = gp_max_payoff(parse_rational(ctx.args.p, "--p"), precision)
    ctx.report.result = {
        "p": format_rational(best.p),
        "value": str(best.value),
        "x": str(best.x),
        "error_radius": str(best.error_bound),
    }
    if best.is_exact:
        ctx.report.result["exact_value"] = format_rational(best.exact_value)
        ctx.report.result["exact_x"] = format_rational(best.exact_x)
    ctx.report.limits["precision"] = precision


COMMANDS: Dict[str, Callable[[RunContext], None]] = {
    "validate": cmd_validate,
    "payoff": cmd_payoff,
    "best-response": cmd_best_response,
    "verify-ne": cmd_verify_ne,
    "solve-posne": cmd_solve_posne,
    "solve-statne": cmd_solve_statne,
    "gen-sat": cmd_gen_sat,
    "gen-sqrtsum": cmd_gen_sqrtsum,
    "gen-2cm": cmd_gen_2cm,
    "sqrtsum-check": cmd_sqrtsum_check,
    "segment-check": cmd_segment_check,
    "bounded-payoff": cmd_bounded_payoff,
    "example": cmd_example,
    "gp-max-payoff": cmd_gp_max_payoff,
}


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors still produce a report."""

    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="Configuration JSON file")
    common.add_argument("--log-file", type=str, default=None, help="Append log lines to this file")
    common.add_argument("--jobs", type=int, default=None, help="Worker threads / solver processes")

    game = argparse.ArgumentParser(add_help=False)
    game.add_argument("--game", type=str, required=True, help="Game JSON file")

    profile = argparse.ArgumentParser(add_help=False)
    profile.add_argument("--profile", type=str, required=True, help="Profile JSON file")

    thresholds = argparse.ArgumentParser(add_help=False)
    thresholds.add_argument("--x", type=str, default=None, help="Lower payoff bounds, e.g. 1,0,0")
    thresholds.add_argument("--y", type=str, default=None, help="Upper payoff bounds, e.g. 1,1,1")
    thresholds.add_argument("--player0-wins", action="store_true",
                            help="Shorthand for x = (1,0,...,0), y = (1,...,1)")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", type=str, required=True, help="Where to write the generated game")

    sqrtsum = argparse.ArgumentParser(add_help=False)
    sqrtsum.add_argument("--instance", type=str, default=None, help="SqrtSum instance 'd1 ... dn ; k'")
    sqrtsum.add_argument("--instance-file", type=str, default=None, help="File holding the instance")

    parser = _Parser(
        prog="ssmg",
        description="Nash equilibria of simple stochastic multiplayer games"
    )
    parser.add_argument("--version", action="version", version=f"ssmg {get_current_version()}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common, game], help="Check a game file")
    sub.add_parser("payoff", parents=[common, game, profile], help="Exact payoff of a profile")
    p = sub.add_parser("best-response", parents=[common, game, profile], help="Best-response value of one player")
    p.add_argument("--player", type=str, required=True, help="Player name")
    sub.add_parser("verify-ne", parents=[common, game, profile, thresholds],
                   help="Check a profile for being an equilibrium within thresholds")

    p = sub.add_parser("solve-posne", parents=[common, game, thresholds],
                       help="Search positional equilibria exhaustively")
    p.add_argument("--cap", type=int, default=None, help="Largest number of positional profiles")

    p = sub.add_parser("solve-statne", parents=[common, game, thresholds],
                       help="Search stationary equilibria through an external solver")
    p.add_argument("--cap", type=int, default=None, help="Largest number of supports")
    p.add_argument("--solver-cmd", type=str, default=None,
                   help=f"Solver command template with {{file}} (default: ${SOLVER_CMD_ENV} or config)")
    p.add_argument("--timeout", type=int, default=None, help="Seconds per solver call")
    p.add_argument("--emit-dir", type=str, default=None, help="Keep formula files in this directory")
    p.add_argument("--keep-files", action="store_true", help="Do not delete formula files")

    p = sub.add_parser("gen-sat", parents=[common, out], help="Game of a DIMACS CNF formula")
    p.add_argument("--cnf", type=str, required=True, help="DIMACS CNF file")
    p.add_argument("--profile-out", type=str, default=None,
                   help="Also write the equilibrium of a satisfying assignment")

    sub.add_parser("gen-sqrtsum", parents=[common, out, sqrtsum], help="Game of a SqrtSum instance")

    p = sub.add_parser("gen-2cm", parents=[common, out], help="Game of a two-counter machine")
    p.add_argument("--machine", type=str, required=True, help="Machine file, one instruction per line")
    p.add_argument("--profile-out", type=str, default=None, help="Also write the intended profile")
    p.add_argument("--horizon", type=int, default=None, help="Configurations the intended profile follows")

    sub.add_parser("sqrtsum-check", parents=[common, sqrtsum], help="Decide Σ√d_i ≥ k")

    p = sub.add_parser("segment-check", parents=[common], help="Counter-gadget probability of one step")
    p.add_argument("--gamma", type=str, required=True, help="Label of the next step: init, inc1, dec2, zero1, ...")
    p.add_argument("--c", type=int, required=True, help="Loops in the current counter gadget")
    p.add_argument("--c-next", type=int, required=True, help="Loops in the next counter gadget")
    p.add_argument("--counter", type=int, choices=(1, 2), default=1, help="Counter j")

    p = sub.add_parser("bounded-payoff", parents=[common, game, profile], help="Payoff intervals by truncation")
    p.add_argument("--horizon", type=int, default=None,
                   help="Vertices (not machine steps) explored along each play; one two-counter step spans six")

    p = sub.add_parser("example", parents=[common, out], help="Write a built-in example game")
    p.add_argument("name", choices=EXAMPLE_NAMES)
    p.add_argument("--profile-out", type=str, default=None, help="Also write a documented profile")
    p.add_argument("--profile-name", type=str, default=None, help="Which documented profile to write")
    p.add_argument("--horizon", type=int, default=None, help="Configurations prop3's profile follows")

    p = sub.add_parser("gp-max-payoff", parents=[common], help="Closed-form gadget maximum for p")
    p.add_argument("--p", type=str, required=True, help="Gadget parameter a/b in [1/2, 1)")
    p.add_argument("--precision", type=int, default=None, help="Significant decimal digits")

    return parser


def _summary(report: RunReport, console: Console) -> None:
    table = Table(title=f"ssmg {' '.join(report.command[:1])}", show_header=False)
    table.add_column("field", style="bold")
    table.add_column("value")
    style = {"yes": "green", "no": "yellow"}.get(report.verdict, "red")
    table.add_row("verdict", f"[{style}]{report.verdict}[/{style}]")
    if report.error:
        table.add_row("error", report.error)
    for key, value in report.result.items():
        if isinstance(value, (dict, list)) and len(json.dumps(value)) > 120:
            value = f"({len(value)} entries, see JSON)"
        table.add_row(key, str(value))
    console.print(table)


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    """Parse argv, run the command, print the report and return the exit code."""
    stdout = stdout or sys.stdout
    console = Console(file=stderr or sys.stderr)
    report = RunReport(command=list(argv))
    profiler = PerformanceProfiler()
    log_file = None
    try:
        args = build_parser().parse_args(list(argv))
        config = ConfigContainer.load(Path(args.config) if args.config else None).analysis
        if args.log_file:
            config.log_file = args.log_file
        log_file = config.log_path
        log_to_file(log_file, f"[CLI] {' '.join(argv)}")
        ctx = RunContext(args, config, profiler, report)
        COMMANDS[args.command](ctx)
    except SolverUnavailable as e:
        report.verdict, report.error = "solver-unavailable", str(e)
    except (MemoryBlowup, CounterCapExceeded) as e:
        report.verdict, report.error = "cap-exceeded", str(e)
    except (SsmgError, OSError, ValueError) as e:
        report.verdict, report.error = "error", str(e)
        report.result = {}
    report.timing = profiler.summary_ms()
    log_to_file(log_file, f"[CLI] verdict={report.verdict} exit={report.exit_code}")
    if profiler.timings:
        log_to_file(log_file, profiler.report(f"[CLI] {report.command[0] if report.command else ''} timing"))
    print(report.to_json(), file=stdout)
    _summary(report, console)
    return report.exit_code


def main():
    """Main entry point for CLI usage."""
    # --help and --version print and exit through argparse
    if any(flag in sys.argv[1:] for flag in ("-h", "--help", "--version")):
        build_parser().parse_args(sys.argv[1:])
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
