"""The pointer pushdown automaton model and its exact small-step semantics.

A machine reads ``< w >`` (left and right end markers around the word) on
positions ``0 .. len(w)+1``.  Every stack entry is a pair of a symbol and
the head position at the moment it was pushed (its *origin*).  A move
either pushes one or more symbols on top of the inspected entry or pops
it; an ``up`` pop teleports the head back to the popped entry's origin.
Hat directions (``hatleft``/``hatdown``/``hatright``) are sugar for a
push/pop pair that changes state and moves the head without touching the
stack; they must be expanded before execution.

A run starts in ``(initial, bottom at origin 0, head 0)`` and accepts when
the final pop empties the stack in a final state with the head on the
right end marker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..errors import MachineInvariantError

LEFT_MARK = "<"
RIGHT_MARK = ">"

LEFT, DOWN, UP, RIGHT = "left", "down", "up", "right"
HAT_LEFT, HAT_DOWN, HAT_RIGHT = "hatleft", "hatdown", "hatright"
CORE_DIRECTIONS = (LEFT, DOWN, UP, RIGHT)
HAT_DIRECTIONS = (HAT_LEFT, HAT_DOWN, HAT_RIGHT)
_HAT_CORE = {HAT_LEFT: LEFT, HAT_DOWN: DOWN, HAT_RIGHT: RIGHT}


@dataclass(frozen=True)
class Move:
    state: str
    push: tuple[str, ...]
    direction: str


DeltaKey = tuple[str, str, str]  # (state, letter or end marker, top symbol)


@dataclass(frozen=True)
class Machine:
    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    stack_alphabet: tuple[str, ...]
    finals: tuple[str, ...]
    initial_state: str
    bottom: str
    delta: Mapping[DeltaKey, Move]
    two_way: bool = False
    meta: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        validate_machine(self)

    @property
    def letters(self) -> tuple[str, ...]:
        """Input letters plus both end markers, in file order."""
        return self.input_alphabet + (LEFT_MARK, RIGHT_MARK)

    def meta_value(self, key: str) -> str | None:
        for k, v in self.meta:
            if k == key:
                return v
        return None

    @property
    def has_hat_moves(self) -> bool:
        return any(mv.direction in HAT_DIRECTIONS for mv in self.delta.values())


def validate_machine(m: Machine) -> None:
    states = set(m.states)
    if len(states) != len(m.states):
        raise MachineInvariantError("duplicate state name")
    gamma = set(m.stack_alphabet)
    if len(gamma) != len(m.stack_alphabet):
        raise MachineInvariantError("duplicate stack symbol")
    sigma = set(m.input_alphabet)
    for ch in m.input_alphabet:
        if len(ch) != 1 or ch in (LEFT_MARK, RIGHT_MARK, '"') or ch.isspace():
            raise MachineInvariantError(f"bad input letter {ch!r}")
    if m.initial_state not in states:
        raise MachineInvariantError(f"unknown initial state {m.initial_state!r}")
    if not set(m.finals) <= states:
        raise MachineInvariantError("final states must be states")
    if m.bottom not in gamma:
        raise MachineInvariantError(f"bottom symbol {m.bottom!r} not in stack alphabet")
    for (q, a, z), mv in m.delta.items():
        where = f"delta({q!r}, {a!r}, {z!r})"
        if q not in states or mv.state not in states:
            raise MachineInvariantError(f"{where}: unknown state")
        if a not in sigma and a not in (LEFT_MARK, RIGHT_MARK):
            raise MachineInvariantError(f"{where}: unknown letter")
        if z not in gamma or not set(mv.push) <= gamma:
            raise MachineInvariantError(f"{where}: unknown stack symbol")
        if mv.direction not in CORE_DIRECTIONS + HAT_DIRECTIONS:
            raise MachineInvariantError(f"{where}: bad direction {mv.direction!r}")
        if mv.direction == UP and mv.push:
            raise MachineInvariantError(f"{where}: an up move must not push")
        if mv.direction in HAT_DIRECTIONS and mv.push:
            raise MachineInvariantError(f"{where}: hat moves carry no push string")
        if a == LEFT_MARK and mv.direction in (LEFT, HAT_LEFT):
            raise MachineInvariantError(f"{where}: cannot move left off the left end marker")
        if a == RIGHT_MARK and mv.direction in (RIGHT, HAT_RIGHT):
            raise MachineInvariantError(f"{where}: cannot move right off the right end marker")
        if not m.two_way and mv.direction in (LEFT, HAT_LEFT):
            raise MachineInvariantError(f"{where}: left moves need a two-way machine")


# --- configurations and stepping ---------------------------------------------


@dataclass(frozen=True)
class Configuration:
    """State, stack of (symbol, origin) pairs with the top first, and head."""

    state: str
    stack: tuple[tuple[str, int], ...]
    head: int


@dataclass(frozen=True)
class Halt:
    reason: str  # "no-transition" or "empty-stack"


def letter_at(word: str, j: int) -> str:
    if j == 0:
        return LEFT_MARK
    if j == len(word) + 1:
        return RIGHT_MARK
    return word[j - 1]


def initial_configuration(m: Machine) -> Configuration:
    return Configuration(m.initial_state, ((m.bottom, 0),), 0)


def step(m: Machine, c: Configuration, word: str) -> Configuration | Halt:
    """One move of the relation; ``Halt`` when no move applies.

    The machine must be hat-free.  Pops remove the top pair (an ``up`` pop
    sets the head to the popped origin); pushes stack the pushed symbols
    above the retained top, every new pair carrying the new head position
    as its origin.
    """
    if not c.stack:
        return Halt("empty-stack")
    a = letter_at(word, c.head)
    mv = m.delta.get((c.state, a, c.stack[0][0]))
    if mv is None:
        return Halt("no-transition")
    if mv.direction in HAT_DIRECTIONS:
        raise MachineInvariantError("step needs a hat-free machine; desugar first")
    if not mv.push:
        top_origin = c.stack[0][1]
        if mv.direction == UP:
            head = top_origin
        elif mv.direction == DOWN:
            head = c.head
        elif mv.direction == RIGHT:
            head = c.head + 1
        else:
            head = c.head - 1
        return Configuration(mv.state, c.stack[1:], head)
    head = c.head + (1 if mv.direction == RIGHT else -1 if mv.direction == LEFT else 0)
    pushed = tuple((sym, head) for sym in mv.push)
    return Configuration(mv.state, pushed + c.stack, head)


# --- full runs ----------------------------------------------------------------

ACCEPT, REJECT, BUDGET = "accept", "reject", "budget"


@dataclass(frozen=True)
class TraceEvent:
    kind: str  # "push" or "pop"
    before: Configuration
    after: Configuration
    popped: tuple[str, int] | None = None
    pop_direction: str | None = None


@dataclass(frozen=True)
class DirectRun:
    outcome: str  # accept / reject / budget
    reason: str | None
    steps: int
    final: Configuration
    trace: tuple[TraceEvent, ...] = field(default=(), repr=False)


def default_step_limit(m: Machine, word: str) -> int:
    return 1000 * (len(word) + 2) * len(m.states) * len(m.stack_alphabet)


def run_direct(
    m: Machine,
    word: str,
    step_limit: int | None = None,
    collect_trace: bool = False,
) -> DirectRun:
    """Iterate the move relation from the initial configuration.

    Accepts when the run halts with an empty stack in a final state with
    the head on the right end marker; any other halt rejects, with the
    reason recorded.  ``budget`` is returned after ``step_limit`` moves.
    """
    if m.has_hat_moves:
        raise MachineInvariantError("run_direct needs a hat-free machine; desugar first")
    limit = default_step_limit(m, word) if step_limit is None else step_limit
    delta = m.delta
    end = len(word) + 1
    finals = set(m.finals)
    state = m.initial_state
    stack: list[tuple[str, int]] = [(m.bottom, 0)]
    head = 0
    steps = 0
    trace: list[TraceEvent] = []

    def snapshot() -> Configuration:
        return Configuration(state, tuple(reversed(stack)), head)

    while True:
        if not stack:
            break
        mv = delta.get((state, letter_at(word, head), stack[-1][0]))
        if mv is None:
            break
        if steps >= limit:
            return DirectRun(BUDGET, None, steps, snapshot(), tuple(trace))
        before = snapshot() if collect_trace else None
        if not mv.push:
            popped = stack.pop()
            if mv.direction == UP:
                head = popped[1]
            elif mv.direction == RIGHT:
                head += 1
            elif mv.direction == LEFT:
                head -= 1
            state = mv.state
            if collect_trace:
                trace.append(TraceEvent("pop", before, snapshot(), popped, mv.direction))
        else:
            if mv.direction == RIGHT:
                head += 1
            elif mv.direction == LEFT:
                head -= 1
            for sym in reversed(mv.push):
                stack.append((sym, head))
            state = mv.state
            if collect_trace:
                trace.append(TraceEvent("push", before, snapshot()))
        steps += 1

    final = snapshot()
    if not stack:
        if state in finals and head == end:
            return DirectRun(ACCEPT, None, steps, final, tuple(trace))
        if state not in finals:
            return DirectRun(REJECT, "non-final-halt", steps, final, tuple(trace))
        return DirectRun(REJECT, "not-at-right-end", steps, final, tuple(trace))
    if state in finals and head == end:
        return DirectRun(REJECT, "stack-not-empty", steps, final, tuple(trace))
    return DirectRun(REJECT, "no-transition", steps, final, tuple(trace))
