#!/usr/bin/env python3
"""
Two-Counter Machine Gadget Game

A two-counter machine runs instructions "inc j k", "test j k l" and "halt"
(1-based numbering) from configuration (1, 0, 0). The generated game has
nine players, player 0 plus A{j}_{t} and B{j}_{t} for counter j ∈ {1,2} and
parity t ∈ {0,1}; it has a pure equilibrium where player 0 wins almost surely
iff the computation is infinite.

Gadget vertex ids:
    S{t}.{i}.{γ}.A1 (initial black vertex), .B1, .A2, .B2, .split and the
    side exits {vertex}.exit paying 1/3 (A) or 1/6 (B) to all eight checkers
    I{t}.{i}.{γ} (player 0) and I{t}.{i}.{γ}.halt for halt instructions
    C{t}.{j}.{γ} (player 0), .grey, .s1, .s2, .s3 and the terminals
    .grey.exit, .s1.exit, .s2.exit, .s3.exit, .end
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Tuple, Union

from src.analysis.product import finite_state_payoff
from src.analysis.profiles import FiniteStateProfile, MemoryMachine
from src.core import SsmgError
from src.reductions.errors import InstanceError
from src.ssmg.desugar import desugar_initialized
from src.ssmg.game import GameBuilder, InitializedGame


DEFAULT_COUNTER_CAP = 10 ** 6

COUNTERS = (1, 2)
PARITIES = (0, 1)

# main-line vertices per machine step: A1, B1, A2, B2, split and the instruction vertex
STEP_VERTICES = 6


class CounterCapExceeded(SsmgError):
    """Raised when a simulated counter grows beyond the configured cap."""
    pass


@dataclass(frozen=True)
class Label:
    """Step label γ: init, or inc/dec/zero of one counter."""
    kind: str
    counter: int = 0

    def __post_init__(self):
        if self.kind == "init":
            if self.counter != 0:
                raise InstanceError("init label takes no counter")
        elif self.kind not in ("inc", "dec", "zero") or self.counter not in COUNTERS:
            raise InstanceError(f"bad label {self.kind}{self.counter}")

    def __str__(self) -> str:
        return "init" if self.kind == "init" else f"{self.kind}{self.counter}"

    @classmethod
    def parse(cls, text: str) -> 'Label':
        match = re.fullmatch(r"(init)|(inc|dec|zero)\(?([12])\)?", text.strip())
        if match is None:
            raise InstanceError(f"unknown label {text!r}")
        if match.group(1):
            return cls("init")
        return cls(match.group(2), int(match.group(3)))

    def loops_on(self, j: int) -> bool:
        """Whether the counter-j gadget of this label has its grey loop edge."""
        return not (self.kind == "init" or (self.kind == "zero" and self.counter == j))


INIT = Label("init")
LABELS = (INIT,) + tuple(Label(kind, j) for j in COUNTERS for kind in ("inc", "dec", "zero"))


@dataclass(frozen=True)
class Inc:
    counter: int
    target: int

    def __str__(self) -> str:
        return f"inc {self.counter} {self.target}"


@dataclass(frozen=True)
class Test:
    counter: int
    zero_target: int
    dec_target: int

    def __str__(self) -> str:
        return f"test {self.counter} {self.zero_target} {self.dec_target}"


@dataclass(frozen=True)
class Halt:
    def __str__(self) -> str:
        return "halt"


Instruction = Union[Inc, Test, Halt]


@dataclass(frozen=True)
class TwoCounterMachine:
    instructions: Tuple[Instruction, ...]

    def __post_init__(self):
        m = len(self.instructions)
        if m == 0:
            raise InstanceError("machine has no instructions")
        for number, ins in enumerate(self.instructions, start=1):
            if isinstance(ins, Halt):
                continue
            if ins.counter not in COUNTERS:
                raise InstanceError(f"instruction {number}: counter {ins.counter} is not 1 or 2")
            targets = (ins.target,) if isinstance(ins, Inc) else (ins.zero_target, ins.dec_target)
            for target in targets:
                if not 1 <= target <= m:
                    raise InstanceError(f"instruction {number}: target {target} outside 1..{m}")
            if isinstance(ins, Test) and ins.zero_target == ins.dec_target:
                raise InstanceError(f"instruction {number}: test targets must differ")

    @property
    def size(self) -> int:
        return len(self.instructions)

    def instruction(self, i: int) -> Instruction:
        return self.instructions[i - 1]

    def to_text(self) -> str:
        return "\n".join(str(ins) for ins in self.instructions) + "\n"


def parse_machine(text: str) -> TwoCounterMachine:
    """One instruction per line; blank lines and '#' comments are ignored."""
    instructions: List[Instruction] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            args = [int(w) for w in words[1:]]
        except ValueError:
            raise InstanceError(f"line {number}: non-integer argument in {line!r}") from None
        op = words[0].lower()
        if op == "inc" and len(args) == 2:
            instructions.append(Inc(*args))
        elif op == "test" and len(args) == 3:
            instructions.append(Test(*args))
        elif op == "halt" and not args:
            instructions.append(Halt())
        else:
            raise InstanceError(f"line {number}: expected 'inc j k', 'test j k l' or 'halt', got {line!r}")
    return TwoCounterMachine(tuple(instructions))


@dataclass(frozen=True)
class Configuration:
    instruction: int
    counters: Tuple[int, int]

    def counter(self, j: int) -> int:
        return self.counters[j - 1]


@dataclass(frozen=True)
class Run:
    """A computation prefix; labels[n] is the step label into configurations[n]."""
    configurations: Tuple[Configuration, ...]
    labels: Tuple[Label, ...]
    halted: bool

    def __len__(self) -> int:
        return len(self.configurations)


def simulate(machine: TwoCounterMachine, steps: int,
             counter_cap: int = DEFAULT_COUNTER_CAP) -> Run:
    """Run the machine for up to `steps` configurations, starting at (1, 0, 0)

    Raises:
        CounterCapExceeded: A counter exceeds counter_cap
    """
    config = Configuration(1, (0, 0))
    configurations = [config]
    labels = [INIT]
    while len(configurations) < steps:
        ins = machine.instruction(config.instruction)
        counters = list(config.counters)
        if isinstance(ins, Halt):
            break
        if isinstance(ins, Inc):
            counters[ins.counter - 1] += 1
            if counters[ins.counter - 1] > counter_cap:
                raise CounterCapExceeded(f"counter {ins.counter} exceeds {counter_cap}")
            config = Configuration(ins.target, tuple(counters))
            labels.append(Label("inc", ins.counter))
        elif counters[ins.counter - 1] == 0:
            config = Configuration(ins.zero_target, tuple(counters))
            labels.append(Label("zero", ins.counter))
        else:
            counters[ins.counter - 1] -= 1
            config = Configuration(ins.dec_target, tuple(counters))
            labels.append(Label("dec", ins.counter))
        configurations.append(config)
    halted = isinstance(machine.instruction(config.instruction), Halt)
    return Run(tuple(configurations), tuple(labels), halted)


def checker(role: str, j: int, t: int) -> str:
    """Player name of checker A or B for counter j at parity t."""
    return f"{role}{j}_{t}"


CHECKERS = tuple(checker(role, j, t) for t in PARITIES for j in COUNTERS for role in ("A", "B"))
TWO_COUNTER_PLAYERS = ("0",) + CHECKERS

_CHAIN = ("A1", "B1", "A2", "B2")


def black_vertex(t: int, i: int, label: Label) -> str:
    return f"S{t}.{i}.{label}.A1"


def chain_vertex(t: int, i: int, label: Label, part: str) -> str:
    return f"S{t}.{i}.{label}.{part}"


def instruction_vertex(t: int, i: int, label: Label) -> str:
    return f"I{t}.{i}.{label}"


def counter_vertex(t: int, j: int, label: Label) -> str:
    return f"C{t}.{j}.{label}"


def grey_vertex(t: int, j: int, label: Label) -> str:
    return f"{counter_vertex(t, j, label)}.grey"


def _counter_winners(label: Label, j: int, t: int) -> Dict[str, Tuple[str, ...]]:
    """Winners at each terminal of the counter-j gadget at parity t."""
    other = 1 - t
    same = ("0", checker("A", j, t), checker("A", j, other))
    cross = ("0", checker("A", j, t), checker("B", j, other))
    if label == Label("inc", j):
        chain = (same, cross, cross)
    elif label == Label("dec", j):
        chain = (cross, cross, same)
    else:
        chain = (cross, same, cross)
    return {
        "grey.exit": cross,
        "s1.exit": chain[0],
        "s2.exit": chain[1],
        "s3.exit": chain[2],
        "end": ("0", checker("B", j, t), checker("B", j, other)),
    }


def _add_counter_gadget(builder: GameBuilder, t: int, j: int, label: Label,
                        companion: Optional[str] = None) -> str:
    q0 = counter_vertex(t, j, label)
    half = Fraction(1, 2)
    winners = _counter_winners(label, j, t)
    builder.add_vertex(q0, owner="0")
    for part in ("grey", "s1", "s2", "s3"):
        builder.add_vertex(f"{q0}.{part}")
    for part, players in winners.items():
        if companion is not None:
            players = players + (companion,)
        builder.add_terminal(f"{q0}.{part}", winners=players)

    builder.add_edge(q0, f"{q0}.s1")
    if label.loops_on(j):
        builder.add_edge(q0, f"{q0}.grey")
    builder.add_edge(f"{q0}.grey", f"{q0}.grey.exit", half)
    builder.add_edge(f"{q0}.grey", q0, half)
    for part, nxt in (("s1", "s2"), ("s2", "s3"), ("s3", "end")):
        builder.add_edge(f"{q0}.{part}", f"{q0}.{part}.exit", half)
        builder.add_edge(f"{q0}.{part}", f"{q0}.{nxt}", half)
    return q0


def _add_step_gadget(builder: GameBuilder, t: int, i: int, label: Label) -> None:
    chain = [chain_vertex(t, i, label, part) for part in _CHAIN]
    split = chain_vertex(t, i, label, "split")
    for part, v in zip(_CHAIN, chain):
        builder.add_vertex(v, owner=checker(part[0], int(part[1]), t))
    builder.add_vertex(split)
    for part, v in zip(_CHAIN, chain):
        share = Fraction(1, 3) if part[0] == "A" else Fraction(1, 6)
        builder.add_payoff_terminal(f"{v}.exit", {name: share for name in CHECKERS})
    for v, nxt in zip(chain, chain[1:] + [split]):
        builder.add_edge(v, nxt)
        builder.add_edge(v, f"{v}.exit")
    builder.add_edge(split, instruction_vertex(t, i, label), Fraction(1, 2))
    builder.add_edge(split, counter_vertex(t, 1, label), Fraction(1, 4))
    builder.add_edge(split, counter_vertex(t, 2, label), Fraction(1, 4))


def instruction_targets(machine: TwoCounterMachine, t: int, i: int) -> Tuple[str, ...]:
    """Black vertices the instruction gadget of ι_i at parity t leads to."""
    other = 1 - t
    ins = machine.instruction(i)
    if isinstance(ins, Inc):
        return (black_vertex(other, ins.target, Label("inc", ins.counter)),)
    if isinstance(ins, Test):
        return (
            black_vertex(other, ins.zero_target, Label("zero", ins.counter)),
            black_vertex(other, ins.dec_target, Label("dec", ins.counter)),
        )
    return ()


def _add_instruction_gadget(builder: GameBuilder, machine: TwoCounterMachine,
                            t: int, i: int, label: Label) -> None:
    v = instruction_vertex(t, i, label)
    builder.add_vertex(v, owner="0")
    targets = instruction_targets(machine, t, i)
    if not targets:
        builder.add_terminal(f"{v}.halt")
        builder.add_edge(v, f"{v}.halt")
    for target in targets:
        builder.add_edge(v, target)


def two_counter_builder(machine: TwoCounterMachine, companion: Optional[str] = None) -> GameBuilder:
    """Builder holding every gadget of the machine game

    Args:
        machine: Two-counter machine
        companion: Extra player appended to the player list who wins
            wherever player 0 wins
    """
    players = TWO_COUNTER_PLAYERS + ((companion,) if companion else ())
    builder = GameBuilder(players)
    for t in PARITIES:
        for i in range(1, machine.size + 1):
            for label in LABELS:
                _add_step_gadget(builder, t, i, label)
                _add_instruction_gadget(builder, machine, t, i, label)
    for t in PARITIES:
        for j in COUNTERS:
            for label in LABELS:
                _add_counter_gadget(builder, t, j, label, companion)
    return builder


def gen_2cm_game(machine: TwoCounterMachine) -> InitializedGame:
    """Nine-player game simulating the machine; initial vertex is the black vertex of S0.1.init."""
    builder = two_counter_builder(machine)
    return desugar_initialized(builder.build_initialized(black_vertex(0, 1, INIT)))


def _checker_machines(machine: TwoCounterMachine) -> Dict[int, MemoryMachine]:
    # every checker moves down the chain
    down: Dict[str, Dict[str, str]] = {name: {} for name in CHECKERS}
    for t in PARITIES:
        for i in range(1, machine.size + 1):
            for label in LABELS:
                chain = [chain_vertex(t, i, label, part) for part in _CHAIN]
                nxt = chain[1:] + [chain_vertex(t, i, label, "split")]
                for part, v, w in zip(_CHAIN, chain, nxt):
                    down[checker(part[0], int(part[1]), t)][v] = w
    return {
        TWO_COUNTER_PLAYERS.index(name): MemoryMachine.memoryless(choices)
        for name, choices in down.items()
    }


def intended_2cm_profile(machine: TwoCounterMachine, horizon: int,
                         counter_cap: int = DEFAULT_COUNTER_CAP) -> FiniteStateProfile:
    """Player 0 follows the computation for `horizon` configurations

    Player 0's memory is (black vertices seen, grey vertices seen), the
    first capped at horizon + 1. After n black vertices the play sits in the
    step gadget of configuration n−1: at the instruction gadget player 0
    moves to the step gadget of configuration n, and in a counter gadget
    she loops through the grey vertex as often as that counter's value in
    configuration n−1. Beyond the simulated prefix she takes the first
    successor. Checkers move down the chain.

    The profile's flags record "halt-reached" when the machine halts within
    the horizon and "horizon-truncated" otherwise.

    Raises:
        CounterCapExceeded: A counter exceeds counter_cap within the horizon
    """
    if horizon < 1:
        raise InstanceError(f"horizon must be positive, got {horizon}")
    run = simulate(machine, horizon, counter_cap)
    steps = len(run)
    grey_cap = max(max(c.counters) for c in run.configurations) + 1
    states = tuple((n, g) for n in range(steps + 2) for g in range(grey_cap + 1))

    update: Dict[Tuple[Hashable, str], Hashable] = {}
    choice: Dict[Tuple[Hashable, str], str] = {}
    for n in range(steps + 1):
        for t in PARITIES:
            for i in range(1, machine.size + 1):
                for label in LABELS:
                    update[((n, 0), black_vertex(t, i, label))] = (n + 1, 0)
    for n in range(1, steps + 1):
        t = (n - 1) % 2
        current = run.configurations[n - 1]
        label = run.labels[n - 1]
        if n < steps:
            nxt = run.configurations[n]
            target = black_vertex(1 - t, nxt.instruction, run.labels[n])
            choice[((n, 0), instruction_vertex(t, current.instruction, label))] = target
        for j in COUNTERS:
            q0, grey = counter_vertex(t, j, label), grey_vertex(t, j, label)
            loops = current.counter(j) if label.loops_on(j) else 0
            for g in range(loops):
                choice[((n, g), q0)] = grey
                update[((n, g), grey)] = (n, g + 1)

    default: Dict[str, str] = {}
    for t in PARITIES:
        for i in range(1, machine.size + 1):
            targets = instruction_targets(machine, t, i)
            for label in LABELS:
                v = instruction_vertex(t, i, label)
                default[v] = targets[0] if targets else f"{v}.halt"
        for j in COUNTERS:
            for label in LABELS:
                default[counter_vertex(t, j, label)] = f"{counter_vertex(t, j, label)}.s1"

    player0 = MemoryMachine.from_tables(states, (0, 0), update, choice, default)
    machines = {0: player0, **_checker_machines(machine)}
    flags = ("halt-reached",) if run.halted else ("horizon-truncated",)
    return FiniteStateProfile(machines, flags)


def counter_update_holds(gamma_next: Label, c: int, c_next: int, counter: int = 1) -> bool:
    """The counter update rule c → c_next for a step labelled gamma_next

    A gadget without a grey edge (init, or zero of this counter) is left
    with loop count 0, so c_next must be 0 there as well.
    """
    if not gamma_next.loops_on(counter) and c_next != 0:
        return False
    if gamma_next == Label("inc", counter):
        return c_next == c + 1
    if gamma_next == Label("dec", counter):
        return c_next == c - 1
    if gamma_next == Label("zero", counter):
        return c == c_next == 0
    return c_next == c


# entry probabilities of the current and the next counter gadget of one step
_SEGMENT_ENTRY = (Fraction(1, 4), Fraction(1, 8))


def _check_loops(gamma_next: Label, c: int, c_next: int, counter: int) -> None:
    if c < 0 or c_next < 0:
        raise InstanceError("loop counts must be nonnegative")
    if c_next > 0 and not gamma_next.loops_on(counter):
        raise InstanceError(
            f"counter-{counter} gadget of {gamma_next} has no grey edge; it cannot loop {c_next} times"
        )


def counter_gadget_masses(loops: int) -> Dict[str, Fraction]:
    """Terminal masses of a counter gadget left after `loops` grey loops

    Each grey visit exits with 1/2 and returns with 1/2; s1, s2 and s3 each
    exit with 1/2 and pass on with 1/2, the last one into `end`.
    """
    half = Fraction(1, 2)
    leave = half ** loops
    return {
        "grey.exit": 1 - leave,
        "s1.exit": leave * half,
        "s2.exit": leave * half ** 2,
        "s3.exit": leave * half ** 3,
        "end": leave * half ** 3,
    }


def segment_probability(gamma_next: Label, c: int, c_next: int, counter: int = 1) -> Fraction:
    """Probability that A{counter}_0 wins within two consecutive counter gadgets

    The current gadget (entered with probability 1/4, looping c times) is
    the inc gadget of the counter; the next one (entered with probability
    1/8, looping c_next times) has label gamma_next. Terminal masses come
    from counter_gadget_masses, winners from the generator's winner table.

    Raises:
        InstanceError: Negative loop counts, or c_next > 0 on a gadget
            without a grey edge
    """
    _check_loops(gamma_next, c, c_next, counter)
    j = counter
    target = checker("A", j, 0)
    total = Fraction(0)
    for t, label, loops in ((0, Label("inc", j), c), (1, gamma_next, c_next)):
        winners = _counter_winners(label, j, t)
        masses = counter_gadget_masses(loops)
        total += _SEGMENT_ENTRY[t] * sum(
            (mass for part, mass in masses.items() if target in winners[part]), Fraction(0)
        )
    return total


def segment_probability_by_play(gamma_next: Label, c: int, c_next: int, counter: int = 1) -> Fraction:
    """segment_probability evaluated on a game of the two generated gadgets

    Player 0 loops c and c_next times under a finite-state strategy and the
    payoff is solved exactly. Slow; used to cross-check the closed form.
    """
    _check_loops(gamma_next, c, c_next, counter)
    j = counter
    current_label = Label("inc", j)
    builder = GameBuilder(TWO_COUNTER_PLAYERS)
    builder.add_vertex("segment")
    first = _add_counter_gadget(builder, 0, j, current_label)
    second = _add_counter_gadget(builder, 1, j, gamma_next)
    builder.add_terminal("segment.rest")
    builder.add_edge("segment", first, _SEGMENT_ENTRY[0])
    builder.add_edge("segment", second, _SEGMENT_ENTRY[1])
    builder.add_edge("segment", "segment.rest", 1 - sum(_SEGMENT_ENTRY))
    ig = builder.build_initialized("segment")

    cap = max(c, c_next) + 1
    choice: Dict[Tuple[Hashable, str], str] = {}
    update: Dict[Tuple[Hashable, str], Hashable] = {}
    for t, label, loops in ((0, current_label, c), (1, gamma_next, c_next)):
        for g in range(loops):
            choice[(g, counter_vertex(t, j, label))] = grey_vertex(t, j, label)
            update[(g, grey_vertex(t, j, label))] = g + 1
    default = {first: f"{first}.s1", second: f"{second}.s1"}
    player0 = MemoryMachine.from_tables(range(cap + 1), 0, update, choice, default)
    payoff = finite_state_payoff(ig, FiniteStateProfile({0: player0}))
    return payoff[TWO_COUNTER_PLAYERS.index(checker("A", j, 0))]
