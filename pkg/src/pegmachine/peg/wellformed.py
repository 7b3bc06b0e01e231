"""Well-formedness analysis: left-recursion detection by abstract interpretation.

Each expression is assigned the set of outcomes it may have: succeed
consuming nothing, succeed consuming at least one letter, fail.  The sets
grow monotonically under fixed-point iteration, so the analysis terminates
and over-approximates actual behaviour.  A grammar is ill-formed when some
nonterminal can reinvoke itself before any input has been consumed; the
report carries one witnessing cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..errors import NotCoreError
from .ast import (
    Choice,
    Empty,
    Expression,
    Grammar,
    Nonterminal,
    Not,
    Sequence,
    Terminal,
)

# Abstract outcome bits.
_EMPTY = 1  # may succeed consuming nothing
_CONSUME = 2  # may succeed consuming at least one letter
_FAIL = 4  # may fail


@dataclass(frozen=True)
class WfReport:
    well_formed: bool
    offending_cycle: tuple[str, ...] | None
    nullable: Mapping[str, bool]
    can_fail: Mapping[str, bool]

    def __post_init__(self) -> None:
        assert self.well_formed == (self.offending_cycle is None)


def _abstract(e: Expression, nt: dict[str, int]) -> int:
    if isinstance(e, Empty):
        return _EMPTY
    if isinstance(e, Terminal):
        return _CONSUME | _FAIL
    if isinstance(e, Nonterminal):
        return nt[e.name]
    if isinstance(e, Sequence):
        a = _abstract(e.left, nt)
        b = _abstract(e.right, nt)
        out = _FAIL & a
        if a & (_EMPTY | _CONSUME):
            out |= _FAIL & b
            if a & _EMPTY and b & _EMPTY:
                out |= _EMPTY
            if (a | b) & _CONSUME and a & (_EMPTY | _CONSUME) and b & (_EMPTY | _CONSUME):
                out |= _CONSUME
        return out
    if isinstance(e, Choice):
        a = _abstract(e.first, nt)
        b = _abstract(e.second, nt)
        out = a & (_EMPTY | _CONSUME)
        if a & _FAIL:
            out |= b
        return out
    if isinstance(e, Not):
        a = _abstract(e.inner, nt)
        out = 0
        if a & _FAIL:
            out |= _EMPTY
        if a & (_EMPTY | _CONSUME):
            out |= _FAIL
        return out
    raise NotCoreError(f"well-formedness analysis needs a core-only grammar, saw {e!r}")


def _zero_reach(e: Expression, nt: dict[str, int], acc: list[str]) -> None:
    """Nonterminals invocable from ``e`` before any input is consumed."""
    if isinstance(e, Nonterminal):
        if e.name not in acc:
            acc.append(e.name)
    elif isinstance(e, Sequence):
        _zero_reach(e.left, nt, acc)
        if _abstract(e.left, nt) & _EMPTY:
            _zero_reach(e.right, nt, acc)
    elif isinstance(e, Choice):
        _zero_reach(e.first, nt, acc)
        if _abstract(e.first, nt) & _FAIL:
            _zero_reach(e.second, nt, acc)
    elif isinstance(e, Not):
        _zero_reach(e.inner, nt, acc)


def check_well_formed(g: Grammar) -> WfReport:
    """Analyse a core-only grammar; raises :class:`NotCoreError` on sugar."""
    nt = {name: 0 for name in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for name in g.nonterminals:
            new = nt[name] | _abstract(g.rules[name], nt)
            if new != nt[name]:
                nt[name] = new
                changed = True

    edges: dict[str, list[str]] = {}
    for name in g.nonterminals:
        acc: list[str] = []
        _zero_reach(g.rules[name], nt, acc)
        edges[name] = acc

    cycle = _find_cycle(g.nonterminals, edges)
    return WfReport(
        well_formed=cycle is None,
        offending_cycle=cycle,
        nullable={name: bool(nt[name] & _EMPTY) for name in g.nonterminals},
        can_fail={name: bool(nt[name] & _FAIL) for name in g.nonterminals},
    )


def _find_cycle(names: tuple[str, ...], edges: dict[str, list[str]]) -> tuple[str, ...] | None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {name: WHITE for name in names}
    for root in names:
        if color[root] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(root, 0)]
        path = [root]
        color[root] = GRAY
        while stack:
            node, idx = stack[-1]
            if idx < len(edges[node]):
                stack[-1] = (node, idx + 1)
                succ = edges[node][idx]
                if color[succ] == GRAY:
                    return tuple(path[path.index(succ) :])
                if color[succ] == WHITE:
                    color[succ] = GRAY
                    stack.append((succ, 0))
                    path.append(succ)
            else:
                color[node] = BLACK
                stack.pop()
                path.pop()
    return None


def require_well_formed(g: Grammar) -> WfReport:
    from ..errors import IllFormedError

    report = check_well_formed(g)
    if not report.well_formed:
        raise IllFormedError(report.offending_cycle)
    return report
