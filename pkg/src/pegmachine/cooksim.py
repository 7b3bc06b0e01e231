"""Linear-time simulation of two-way pointer machines by memoized terminators.

A *surface configuration* is the part of a configuration the next move can
see: state, top stack symbol, head position, and (because up pops consult
it) the top symbol's origin.  The *terminator* of a surface configuration
``C`` is the first surface configuration in the run from ``C`` at which
the symbol that was on top at ``C`` is about to be popped.

Terminators satisfy a recurrence: a pop move terminates immediately, and
for a push move the terminator of the pushed symbol's episode determines,
through its pop move, the surface configuration from which the original
symbol's episode continues with the same top symbol.  Each surface
configuration is computed at most once into a write-once table; reaching a
configuration whose computation is still open proves the machine loops,
and the input is rejected outright.  Evaluation is iterative with an
explicit frame stack, so recursion depth never grows with the input.

Multi-symbol pushes are handled by chasing the pushed symbols' episodes in
order, which generalizes the single-push recurrence without changing the
memoization discipline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MachineInvariantError
from .pppda.machine import LEFT, Machine, RIGHT, UP, letter_at

ACCEPT, REJECT = "accept", "reject"


@dataclass(frozen=True)
class SurfaceConfig:
    state: str
    top_symbol: str
    head: int
    origin: int


@dataclass(frozen=True)
class Done:
    terminator: SurfaceConfig


@dataclass(frozen=True)
class NoTerminator:
    """The chase reached a configuration with no move; the top is never popped."""


@dataclass(frozen=True)
class LoopDetected:
    at: SurfaceConfig


TerminatorResult = Done | NoTerminator | LoopDetected

_NO_TERMINATOR = NoTerminator()
_IN_PROGRESS = object()


class TerminatorTable:
    """Write-once memo of surface configurations, counting table operations."""

    def __init__(self) -> None:
        self._entries: dict[SurfaceConfig, object] = {}
        self.ops = 0

    def get(self, key: SurfaceConfig) -> object:
        self.ops += 1
        return self._entries.get(key)

    def mark_in_progress(self, key: SurfaceConfig) -> None:
        self.ops += 1
        self._entries[key] = _IN_PROGRESS

    def finish(self, key: SurfaceConfig, value: object) -> None:
        self.ops += 1
        if self._entries.get(key) is not _IN_PROGRESS:
            raise MachineInvariantError("terminator table entries are write-once")
        self._entries[key] = value

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class _Frame:
    """Computes the terminator shared by all surface configs in ``keys``.

    ``sym``/``origin`` stay fixed along a frame's chase; ``state``/``head``
    track the walk.  ``chain`` holds pushed symbols whose episodes must
    finish (each a child frame) before the walk continues on ``sym``.
    """

    sym: str
    origin: int
    state: str
    head: int
    keys: list[SurfaceConfig] = field(default_factory=list)
    chain: tuple[str, ...] | None = None
    chain_origin: int = 0
    chain_idx: int = 0


def _new_head(direction: str, head: int, origin: int) -> int:
    if direction == UP:
        return origin
    if direction == RIGHT:
        return head + 1
    if direction == LEFT:
        return head - 1
    return head


def terminator(
    m: Machine,
    word: str,
    c: SurfaceConfig,
    table: TerminatorTable,
) -> TerminatorResult:
    """Compute (and memoize) the terminator of ``c``; reused entries are free."""
    if m.has_hat_moves:
        raise MachineInvariantError("terminator needs a hat-free machine; desugar first")
    hit = table.get(c)
    if isinstance(hit, (Done, NoTerminator)):
        return hit
    if hit is _IN_PROGRESS:
        return LoopDetected(c)
    table.mark_in_progress(c)

    delta = m.delta
    frames = [_Frame(c.top_symbol, c.origin, c.state, c.head, keys=[c])]
    result: object = None  # child result being handed to the frame below

    while frames:
        frame = frames[-1]
        if result is not None:
            if isinstance(result, NoTerminator):
                for key in frame.keys:
                    table.finish(key, _NO_TERMINATOR)
                frames.pop()
                continue
            # Apply the pop move at the child's terminator.
            t: SurfaceConfig = result.terminator  # type: ignore[union-attr]
            mv = delta[(t.state, letter_at(word, t.head), t.top_symbol)]
            frame.state = mv.state
            frame.head = _new_head(mv.direction, t.head, t.origin)
            frame.chain_idx += 1
            result = None

        outcome = _advance(m, word, table, frame)
        if isinstance(outcome, LoopDetected):
            return outcome
        if isinstance(outcome, SurfaceConfig):  # open a child frame
            table.mark_in_progress(outcome)
            frames.append(
                _Frame(outcome.top_symbol, outcome.origin, outcome.state, outcome.head,
                       keys=[outcome])
            )
            continue
        # frame resolved: Done or NoTerminator
        for key in frame.keys:
            table.finish(key, outcome)
        frames.pop()
        result = outcome

    assert isinstance(result, (Done, NoTerminator))
    return result


def _advance(
    m: Machine,
    word: str,
    table: TerminatorTable,
    frame: _Frame,
):
    """Drive one frame until it resolves, needs a child, or detects a loop.

    Returns ``Done``/``NoTerminator`` when resolved, a ``SurfaceConfig``
    when a child episode must be computed first, or ``LoopDetected``.
    """
    delta = m.delta
    while True:
        if frame.chain is not None:
            if frame.chain_idx < len(frame.chain):
                sub = SurfaceConfig(
                    frame.state,
                    frame.chain[frame.chain_idx],
                    frame.head,
                    frame.chain_origin,
                )
                hit = table.get(sub)
                if hit is _IN_PROGRESS:
                    return LoopDetected(sub)
                if isinstance(hit, NoTerminator):
                    return hit
                if isinstance(hit, Done):
                    t = hit.terminator
                    mv = delta[(t.state, letter_at(word, t.head), t.top_symbol)]
                    frame.state = mv.state
                    frame.head = _new_head(mv.direction, t.head, t.origin)
                    frame.chain_idx += 1
                    continue
                return sub  # unvisited: compute the child episode
            # Chain finished: the frame's own symbol is on top again.
            frame.chain = None
            tail = SurfaceConfig(frame.state, frame.sym, frame.head, frame.origin)
            hit = table.get(tail)
            if hit is _IN_PROGRESS:
                return LoopDetected(tail)
            if isinstance(hit, (Done, NoTerminator)):
                return hit
            table.mark_in_progress(tail)
            frame.keys.append(tail)
            # fall through to inspect the move at the tail surface
        mv = delta.get((frame.state, letter_at(word, frame.head), frame.sym))
        if mv is None:
            return _NO_TERMINATOR
        if not mv.push:
            return Done(SurfaceConfig(frame.state, frame.sym, frame.head, frame.origin))
        new_head = _new_head(mv.direction, frame.head, 0)
        frame.chain = mv.push
        frame.chain_origin = new_head
        frame.chain_idx = 0
        frame.state = mv.state
        frame.head = new_head


@dataclass(frozen=True)
class LinearRun:
    outcome: str  # accept / reject
    reason: str | None
    ops: int
    table_size: int
    loop_at: SurfaceConfig | None = None


def run_linear(m: Machine, word: str) -> LinearRun:
    """Accept or reject in time linear in the input length.

    Computes the terminator of the initial surface configuration, applies
    its pop move, and accepts exactly when that lands in a final state on
    the right end marker (the stack, being a single symbol deep at start,
    is then empty).  A detected loop or a stuck chase rejects.
    """
    table = TerminatorTable()
    start = SurfaceConfig(m.initial_state, m.bottom, 0, 0)
    res = terminator(m, word, start, table)
    if isinstance(res, LoopDetected):
        return LinearRun(REJECT, "loop", table.ops, len(table), res.at)
    if isinstance(res, NoTerminator):
        return LinearRun(REJECT, "stuck", table.ops, len(table))
    t = res.terminator
    mv = m.delta[(t.state, letter_at(word, t.head), t.top_symbol)]
    head = _new_head(mv.direction, t.head, t.origin)
    if mv.state in m.finals and head == len(word) + 1:
        return LinearRun(ACCEPT, None, table.ops, len(table))
    if mv.state not in m.finals:
        return LinearRun(REJECT, "non-final-halt", table.ops, len(table))
    return LinearRun(REJECT, "not-at-right-end", table.ops, len(table))


@dataclass(frozen=True)
class WorkReport:
    ops: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.ops <= self.bound


# Constant factor of the table-operation bound asserted by work_bound_check.
WORK_BOUND_FACTOR = 4


def work_bound_check(m: Machine, word: str) -> WorkReport:
    """Run the linear engine and compare its table operations to the bound.

    The bound is ``2 * |Q| * |Gamma| * (n + 2) * 4``: at most two episode
    chases touch each materialized surface configuration, and each touch
    costs a bounded handful of table operations.
    """
    run = run_linear(m, word)
    bound = 2 * len(m.states) * len(m.stack_alphabet) * (len(word) + 2) * WORK_BOUND_FACTOR
    return WorkReport(run.ops, bound)
