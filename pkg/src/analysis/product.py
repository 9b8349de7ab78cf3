#!/usr/bin/env python3
"""
Product Construction

Unfolds a game together with the joint memory of finite-state strategies
into an ordinary game. Vertices of the product are (vertex, memory tuple)
pairs reached from the initial pair; terminals are shared across memories.

With a free player, that player's vertices stay owned in the product and
her memory is left out, so the product is the MDP she faces.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Hashable, List, Optional, Tuple

from src.analysis.markov import PayoffVector, stationary_payoff
from src.analysis.profiles import FiniteStateProfile, ProfileError, StationaryProfile
from src.core import SsmgError, log_to_file
from src.ssmg.game import Game, InitializedGame, Transition, require_pure


DEFAULT_MEMORY_CAP = 200_000

Memory = Tuple[Hashable, ...]


class MemoryBlowup(SsmgError):
    """Raised when the reachable product exceeds the configured cap."""
    pass


@dataclass(frozen=True)
class ProductGame:
    """An unfolded product and the (vertex, memory) pair behind each product vertex."""
    ig: InitializedGame
    origin: Dict[str, Tuple[str, Optional[Memory]]]


class JointMemory:
    """Steps the memories of every (non-free) player along a play."""

    def __init__(self, game: Game, profile: FiniteStateProfile, free_player: Optional[int] = None):
        self.game = game
        self.profile = profile
        self.free_player = free_player
        self.machines = [
            None if i == free_player else profile.machine(i)
            for i in range(game.num_players)
        ]
        self.state_sets = [None if m is None else frozenset(m.states) for m in self.machines]

    def initial(self) -> Memory:
        return tuple(None if m is None else m.initial for m in self.machines)

    def update(self, memory: Memory, v: str) -> Memory:
        nxt = []
        for machine, states, m in zip(self.machines, self.state_sets, memory):
            if machine is None:
                nxt.append(None)
                continue
            m2 = machine.update(m, v)
            if m2 not in states:
                raise ProfileError(f"update({m!r}, {v!r}) = {m2!r} is not a memory state")
            nxt.append(m2)
        return tuple(nxt)

    def moves(self, memory: Memory, v: str) -> List[Tuple[str, Optional[Fraction]]]:
        """Outgoing (successor, probability) pairs; probability None marks a free choice."""
        owner = self.game.owner_of(v)
        if owner is None:
            return [(w, p) for w, p in self.game.row(v).items() if p > 0]
        if owner == self.free_player:
            return [(w, None) for w in self.game.successors(v)]
        machine = self.machines[owner]
        if machine is None:
            raise ProfileError(f"player {self.game.players[owner]!r} owns {v!r} but has no machine")
        w = machine.choice(memory[owner], v)
        if w not in self.game.successors(v):
            raise ProfileError(f"choice at {v!r} in memory {memory[owner]!r} is {w!r}, not a successor")
        return [(w, Fraction(1))]


def build_product(ig: InitializedGame, profile: FiniteStateProfile,
                  free_player: Optional[int] = None,
                  cap: int = DEFAULT_MEMORY_CAP,
                  log_file: Optional[Path] = None) -> ProductGame:
    """Unfold the reachable product of a game and a finite-state profile

    Args:
        ig: Initialized game
        profile: Finite-state profile
        free_player: Player left unconstrained (her vertices stay owned)
        cap: Maximum number of product vertices
        log_file: Optional log file

    Returns:
        ProductGame whose initial vertex is (v0, initial memory)

    Raises:
        MemoryBlowup: If more than cap product vertices are reachable
        ProfileError: If a choice leaves vΔ or an update leaves the memory set
    """
    game = require_pure(ig.game)
    joint = JointMemory(game, profile, free_player)
    memory_ids: Dict[Memory, int] = {}

    def product_id(v: str, memory: Memory) -> str:
        if game.is_terminal(v):
            return v
        if memory not in memory_ids:
            memory_ids[memory] = len(memory_ids)
        return f"{v}#{memory_ids[memory]}"

    start = (ig.initial, joint.initial())
    start_id = product_id(*start)
    origin = {start_id: (ig.initial, None if game.is_terminal(ig.initial) else start[1])}
    vertices = [start_id]
    owner: Dict[str, int] = {}
    transitions: List[Transition] = []
    queue = deque([start])

    while queue:
        v, memory = queue.popleft()
        source = product_id(v, memory)
        if game.is_terminal(v):
            if game.owner_of(v) is not None and game.owner[v] == free_player:
                owner[source] = free_player
                transitions.append(Transition(source, source, None))
            else:
                transitions.append(Transition(source, source, Fraction(1)))
            continue
        if game.owner_of(v) is not None and game.owner[v] == free_player:
            owner[source] = free_player
        nxt = joint.update(memory, v)
        for w, p in joint.moves(memory, v):
            target = product_id(w, nxt)
            transitions.append(Transition(source, target, p))
            if target not in origin:
                origin[target] = (w, None if game.is_terminal(w) else nxt)
                vertices.append(target)
                queue.append((w, nxt))
                if len(vertices) > cap:
                    log_to_file(log_file, f"[Product] cap of {cap} product vertices exceeded")
                    raise MemoryBlowup(f"product exceeds {cap} vertices")

    win_sets = {
        i: frozenset(v for v in vertices if game.is_terminal(origin[v][0]) and origin[v][0] in members)
        for i, members in game.win_sets.items()
    }
    product = Game(game.players, tuple(vertices), owner, tuple(transitions), win_sets)
    log_to_file(log_file, f"[Product] {len(vertices)} product vertices, {len(memory_ids)} joint memories")
    return ProductGame(InitializedGame(product, start_id), origin)


def finite_state_payoff(ig: InitializedGame, profile: FiniteStateProfile,
                        cap: int = DEFAULT_MEMORY_CAP,
                        log_file: Optional[Path] = None) -> PayoffVector:
    """Exact payoff of a finite-state profile

    Args:
        ig: Initialized game
        profile: Finite-state profile
        cap: Product-size cap
        log_file: Optional log file

    Returns:
        Payoff vector (one entry per player index)

    Raises:
        MemoryBlowup: If the reachable product exceeds cap
    """
    product = build_product(ig, profile, cap=cap, log_file=log_file)
    return stationary_payoff(product.ig, StationaryProfile({}))
