"""Hat-move expansion and the machine normal form used by grammar extraction.

``normalize`` rewrites a one-way machine, preserving its language, until:

1. pops move only ``down`` or ``up`` (a pop moving ``right`` becomes a
   stay-put push/pop shuffle followed by a ``down`` pop one cell later);
2. every push adds exactly one symbol (a ``k``-symbol push becomes the
   deepest symbol on the original direction followed by ``k-1`` single
   ``down`` pushes through fresh chain states);
3. a fresh outer bottom marker sits below everything and is popped
   ``down`` exactly once, at a former final state;
4. after the initial skip of the left end marker the head never returns
   to it: work the original machine performed on the left end marker is
   simulated in finite control ("begin mode"), with symbols it pushed
   there wrapped as tagged variants whose ``up`` pop re-enters begin mode;
5. the final pop direction is ``down``.

The rewritten machine behaves identically whether started on the left end
marker or directly on the first input cell with the bottom origin set to
1, which is the convention the machine-to-grammar extraction relies on.
"""

from __future__ import annotations

from ..errors import MachineInvariantError, NotNormalError
from .machine import (
    DOWN,
    HAT_DIRECTIONS,
    LEFT_MARK,
    Machine,
    Move,
    RIGHT,
    RIGHT_MARK,
    UP,
    _HAT_CORE,
)


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def desugar_hat_moves(m: Machine) -> Machine:
    """Expand each hat move into a fresh push plus letter-independent pops.

    A hat move in direction ``d`` pushes a fresh symbol while moving ``d``,
    then pops it ``down`` whatever the letter, landing in the target state
    with the stack as it was.
    """
    if not m.has_hat_moves:
        return m
    states = list(m.states)
    gamma = list(m.stack_alphabet)
    taken_states = set(states)
    taken_syms = set(gamma)
    delta: dict[tuple[str, str, str], Move] = {}
    for (q, a, z), mv in m.delta.items():
        if mv.direction not in HAT_DIRECTIONS:
            delta[(q, a, z)] = mv
            continue
        core = _HAT_CORE[mv.direction]
        sym = _fresh(f"hat:{q}:{a}:{z}", taken_syms)
        mid = _fresh(f"hats:{q}:{a}:{z}", taken_states)
        gamma.append(sym)
        states.append(mid)
        delta[(q, a, z)] = Move(mid, (sym,), core)
        pop_letters = list(m.input_alphabet) + [RIGHT_MARK]
        if core != RIGHT:
            pop_letters.append(LEFT_MARK)  # a hatdown/hatleft may pop on the marker
        for sigma in pop_letters:
            delta[(mid, sigma, sym)] = Move(mv.state, (), DOWN)
    return Machine(
        states=tuple(states),
        input_alphabet=m.input_alphabet,
        stack_alphabet=tuple(gamma),
        finals=m.finals,
        initial_state=m.initial_state,
        bottom=m.bottom,
        delta=delta,
        two_way=m.two_way,
        meta=m.meta,
    )


# Fresh-name prefixes used by normalize; stage D state names.
def _norm(q: str) -> str:
    return "m:" + q


def _begin(q: str) -> str:
    return "b:" + q


def _tagged(z: str) -> str:
    return "[" + z + "<]"


NEW_BOTTOM = "nz:#"
_INIT = "nz:init"
_FIN = "nz:fin"
_SKIP_STATE = "nz:skip"
_SKIP_SYM = "nz:skip-sym"


def normalize(m: Machine) -> Machine:
    """Rewrite a one-way machine into the five-property normal form."""
    if m.two_way:
        raise NotNormalError("normalize supports one-way machines only")
    m = desugar_hat_moves(m)
    m = _stage_pop_directions(m)
    m = _stage_single_push(m)
    m = _stage_outer_bottom(m)
    m = _stage_leave_left_mark(m)
    check_normal(m)
    return m


def _wild(m: Machine) -> list[str]:
    return list(m.input_alphabet) + [RIGHT_MARK]


def _stage_pop_directions(m: Machine) -> Machine:
    states = list(m.states)
    gamma = list(m.stack_alphabet)
    taken_states = set(states)
    taken_syms = set(gamma)
    delta: dict[tuple[str, str, str], Move] = {}
    for (q, a, z), mv in m.delta.items():
        if mv.push or mv.direction in (DOWN, UP):
            delta[(q, a, z)] = mv
            continue
        # Pop moving right: shuffle one cell right, then pop down there.
        sym = _fresh(f"nr:{q}:{a}:{z}", taken_syms)
        mid1 = _fresh(f"nr1:{q}:{a}:{z}", taken_states)
        mid2 = _fresh(f"nr2:{q}:{a}:{z}", taken_states)
        gamma.append(sym)
        states.extend([mid1, mid2])
        delta[(q, a, z)] = Move(mid1, (sym,), RIGHT)
        for sigma in _wild(m):
            delta[(mid1, sigma, sym)] = Move(mid2, (), DOWN)
            delta[(mid2, sigma, z)] = Move(mv.state, (), DOWN)
    return Machine(
        tuple(states), m.input_alphabet, tuple(gamma), m.finals,
        m.initial_state, m.bottom, delta, m.two_way, m.meta,
    )


def _stage_single_push(m: Machine) -> Machine:
    states = list(m.states)
    taken_states = set(states)
    delta: dict[tuple[str, str, str], Move] = {}
    chain_cache: dict[tuple[str, tuple[str, ...]], str] = {}

    def chain_state(target: str, remaining: tuple[str, ...]) -> str:
        key = (target, remaining)
        if key not in chain_cache:
            name = _fresh("np:" + target + ":" + ",".join(remaining), taken_states)
            states.append(name)
            chain_cache[key] = name
        return chain_cache[key]

    chain_entries: dict[tuple[str, str, str], Move] = {}
    for (q, a, z), mv in m.delta.items():
        if len(mv.push) <= 1:
            delta[(q, a, z)] = mv
            continue
        # Push the deepest symbol first on the original direction, then the
        # rest one by one with down moves; all land at the same origin.
        syms = mv.push  # syms[0] is the top once everything is pushed
        first = chain_state(mv.state, syms[:-1])
        delta[(q, a, z)] = Move(first, (syms[-1],), mv.direction)
        for i in range(len(syms) - 1, 0, -1):
            below = syms[i]  # symbol just pushed, inspected by the next link
            remaining = syms[:i]
            src = chain_state(mv.state, remaining)
            if len(remaining) == 1:
                nxt: str = mv.state
            else:
                nxt = chain_state(mv.state, remaining[:-1])
            # The chain may run on the left end marker too (a down push there
            # keeps the head on it), so quantify over every letter.
            for sigma in _wild(m) + [LEFT_MARK]:
                entry = Move(nxt, (remaining[-1],), DOWN)
                prev = chain_entries.get((src, sigma, below))
                if prev is not None and prev != entry:
                    raise MachineInvariantError("push chain collision")
                chain_entries[(src, sigma, below)] = entry
    delta.update(chain_entries)
    return Machine(
        tuple(states), m.input_alphabet, m.stack_alphabet, m.finals,
        m.initial_state, m.bottom, delta, m.two_way, m.meta,
    )


def _stage_outer_bottom(m: Machine) -> Machine:
    taken_states = set(m.states)
    taken_syms = set(m.stack_alphabet)
    nz = _fresh(NEW_BOTTOM, taken_syms)
    init = _fresh(_INIT, taken_states)
    fin = _fresh(_FIN, taken_states)
    delta = dict(m.delta)
    delta[(init, LEFT_MARK, nz)] = Move(m.initial_state, (m.bottom,), DOWN)
    for f in m.finals:
        for sigma in [LEFT_MARK] + _wild(m):
            delta[(f, sigma, nz)] = Move(fin, (), DOWN)
    return Machine(
        tuple(list(m.states) + [init, fin]),
        m.input_alphabet,
        tuple(list(m.stack_alphabet) + [nz]),
        (fin,),
        init,
        nz,
        delta,
        m.two_way,
        m.meta,
    )


def _stage_leave_left_mark(m: Machine) -> Machine:
    """Simulate all work on the left end marker in finite control.

    Begin-mode states keep the head parked on cell 1 while replaying the
    machine's left-end-marker moves; symbols pushed in begin mode are
    tagged so that popping them ``up`` re-enters begin mode.  The initial
    state first skips the marker, so a run started conventionally and a
    run started directly at cell 1 coincide from the first input cell on.
    """
    # Joint fixpoint: which states can act on the left end marker, and which
    # symbols are pushed while doing so.  Begin mode propagates through
    # marker moves that keep the head there and through up pops (from either
    # mode) of symbols pushed in begin mode.
    begin_states: set[str] = {m.initial_state}
    tagged_syms: set[str] = set()
    changed = True
    while changed:
        changed = False
        for (q, a, _z), mv in m.delta.items():
            if a == LEFT_MARK and q in begin_states:
                if mv.push and mv.direction == DOWN:
                    if mv.push[0] not in tagged_syms:
                        tagged_syms.add(mv.push[0])
                        changed = True
                    enter_begin = True
                elif not mv.push and mv.direction in (DOWN, UP):
                    enter_begin = True  # up pops are resolved per tag below
                else:
                    enter_begin = False  # a right move leaves the marker
            elif not mv.push and mv.direction == UP and _z in tagged_syms:
                enter_begin = True
            else:
                enter_begin = False
            if enter_begin and mv.state not in begin_states:
                begin_states.add(mv.state)
                changed = True

    states: list[str] = []
    for q in m.states:
        states.append(_norm(q))
        if q in begin_states:
            states.append(_begin(q))
    skip_state = _fresh(_SKIP_STATE, set(states))
    states.append(skip_state)
    gamma = list(m.stack_alphabet) + [_tagged(z) for z in m.stack_alphabet if z in tagged_syms]
    skip_sym = _fresh(_SKIP_SYM, set(gamma))
    gamma.append(skip_sym)

    delta: dict[tuple[str, str, str], Move] = {}
    for (q, a, z), mv in m.delta.items():
        if a == LEFT_MARK:
            if q not in begin_states:
                continue
            for variant in (z,) if z not in tagged_syms else (z, _tagged(z)):
                translated = _begin_move(mv, tagged=variant != z)
                for sigma in _wild(m):
                    delta[(_begin(q), sigma, variant)] = translated
        else:
            for variant in (z,) if z not in tagged_syms else (z, _tagged(z)):
                if not mv.push and mv.direction == UP and variant != z:
                    out = Move(_begin(mv.state), (), UP)
                else:
                    out = Move(_norm(mv.state), mv.push, mv.direction)
                delta[(_norm(q), a, variant)] = out

    init = _begin(m.initial_state)
    delta[(init, LEFT_MARK, m.bottom)] = Move(skip_state, (skip_sym,), RIGHT)
    for sigma in _wild(m):
        delta[(skip_state, sigma, skip_sym)] = Move(init, (), DOWN)

    return Machine(
        tuple(states),
        m.input_alphabet,
        tuple(gamma),
        tuple(_norm(f) for f in m.finals),
        init,
        m.bottom,
        delta,
        m.two_way,
        m.meta,
    )


def _begin_move(mv: Move, tagged: bool) -> Move:
    if mv.push:
        if mv.direction == DOWN:
            return Move(_begin(mv.state), (_tagged(mv.push[0]),), DOWN)
        return Move(_norm(mv.state), mv.push, DOWN)  # a right push lands on cell 1
    if mv.direction == DOWN:
        return Move(_begin(mv.state), (), DOWN)
    # Up pop of the inspected symbol: a tagged origin is the parking cell
    # (begin mode again), an untagged one is a real input cell.
    return Move(_begin(mv.state) if tagged else _norm(mv.state), (), UP)


def check_normal(m: Machine) -> None:
    """Raise unless all five normal-form properties hold structurally."""
    if m.two_way:
        raise NotNormalError("machine is two-way")
    if m.has_hat_moves:
        raise NotNormalError("machine has hat moves")
    left_entries = [k for k in m.delta if k[1] == LEFT_MARK]
    if len(left_entries) > 1:
        raise NotNormalError("left end marker is consulted beyond the initial skip")
    for (q, a, z), mv in m.delta.items():
        if not mv.push and mv.direction not in (DOWN, UP):
            raise NotNormalError(f"pop at {(q, a, z)!r} moves {mv.direction}")
        if len(mv.push) > 1:
            raise NotNormalError(f"push at {(q, a, z)!r} adds {len(mv.push)} symbols")
        if m.bottom in mv.push:
            raise NotNormalError("bottom marker occurs in a push string")
        if z == m.bottom and not mv.push and mv.direction != DOWN:
            raise NotNormalError("bottom marker must be popped down")
