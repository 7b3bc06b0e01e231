"""Left concatenation of a deterministic pushdown language with a grammar machine.

The product machine simulates the DPDA on a growing prefix.  Whenever the
DPDA passes through an accepting state, the machine suspends it: it
pushes a checkpoint symbol recording the DPDA state to resume, pushes the
grammar machine's axiom symbol, and lets the compiled grammar machinery
(whose success/failure states are read from the compiled machine's
metadata) try the remaining suffix.  Failure pops the checkpoint with an
``up`` move, teleporting the head back to the suspension cell, and the
DPDA resumes in "already tried here" mode so the same suspension never
refires.  Success drains the stack at the right end marker into the only
final state.  Prefixes are therefore tried shortest first until the DPDA
gets stuck or the end of input is passed.
"""

from __future__ import annotations

from ..errors import CompositionError
from ..pppda.machine import (
    DOWN,
    HAT_DOWN,
    HAT_RIGHT,
    LEFT_MARK,
    Machine,
    Move,
    RIGHT,
    RIGHT_MARK,
    UP,
)
from ..pppda.normalize import desugar_hat_moves
from ..translate import (
    META_AXIOM_SYMBOL,
    META_FAIL_STATE,
    META_KIND,
    META_KIND_COMPILED,
    META_OK_STATE,
    META_WORK_STATE,
)
from .dpda import Dpda, EPSILON

_BOTTOM = "cc:#"
_INIT = "cc:init"
_DRAIN = "cc:acc"


def _go(q: str) -> str:
    return "x:" + q


def _try(q: str) -> str:
    return "xt:" + q


def _xsym(z: str) -> str:
    return "xs:" + z


def _cp(q: str) -> str:
    return "cp:" + q


def left_concat_dcfl(x: Dpda, y: Machine) -> Machine:
    """Machine for ``L(x)·L(y)``; ``y`` must be a compiled grammar machine.

    The grammar behind ``y`` must have been compiled over an alphabet
    containing the DPDA's, so that its letter-quantified rules cover every
    input letter of the product.
    """
    if y.two_way:
        raise CompositionError("the grammar machine must be one-way")
    if y.meta_value(META_KIND) != META_KIND_COMPILED:
        raise CompositionError(
            "left_concat_dcfl needs a compiled grammar machine (run compile first)"
        )
    if not set(x.input_alphabet) <= set(y.input_alphabet):
        raise CompositionError(
            "the grammar machine's alphabet must contain the DPDA's; "
            "recompile the grammar with a wider @alphabet"
        )
    axiom_sym = y.meta_value(META_AXIOM_SYMBOL)
    work = y.meta_value(META_WORK_STATE)
    ok_state = y.meta_value(META_OK_STATE)
    fail_state = y.meta_value(META_FAIL_STATE)

    sigma = list(y.input_alphabet)
    wild = sigma + [RIGHT_MARK]
    delta: dict[tuple[str, str, str], Move] = {}

    def emit(q: str, a: str, z: str, mv: Move) -> None:
        key = (q, a, z)
        if key in delta and delta[key] != mv:
            raise CompositionError(f"composition collision at {key!r}")
        delta[key] = mv

    def target(q: str) -> str:
        return _try(q) if q in x.finals else _go(q)

    # Import the grammar machine's rules, except those on its own bottom:
    # the checkpoint plays that role here.
    for (q, a, z), mv in y.delta.items():
        if z == y.bottom:
            continue
        emit(q, a, z, mv)

    x_syms = [_xsym(z) for z in x.stack_alphabet]
    states: list[str] = [_INIT, _DRAIN]
    for q in x.states:
        states.append(_go(q))
        if q in x.finals:
            states.append(_try(q))

    # Start: enter the DPDA with its own bottom above ours, head on cell 1.
    emit(_INIT, LEFT_MARK, _BOTTOM, Move(target(x.initial_state), (_xsym(x.bottom),), RIGHT))

    replace_states: dict[tuple[str, tuple[str, ...]], str] = {}

    def replace_state(q2: str, push: tuple[str, ...]) -> str:
        key = (q2, push)
        if key not in replace_states:
            name = f"xr:{q2}:" + ",".join(push)
            replace_states[key] = name
            states.append(name)
            for sigma_ in wild:
                for t in x_syms + [_BOTTOM]:
                    emit(name, sigma_, t, Move(target(q2), tuple(_xsym(s) for s in push), DOWN))
        return replace_states[key]

    def emit_dpda_move(q: str, a: str, z: str, q2: str, push: tuple[str, ...]) -> None:
        """One DPDA move as pointer-machine stack surgery on the tagged stack."""
        src, top = _go(q), _xsym(z)
        consume = a != EPSILON
        letters = [a] if consume else wild
        for letter in letters:
            if not push:
                emit(src, letter, top, Move(target(q2), (), RIGHT if consume else DOWN))
            elif push[-1] == z:
                rest = tuple(_xsym(s) for s in push[:-1])
                if rest:
                    emit(src, letter, top, Move(target(q2), rest, RIGHT if consume else DOWN))
                else:
                    emit(src, letter, top,
                         Move(target(q2), (), HAT_RIGHT if consume else HAT_DOWN))
            else:
                mid = replace_state(q2, push)
                emit(src, letter, top, Move(mid, (), RIGHT if consume else DOWN))

    for (q, a, z), (q2, push) in x.delta.items():
        emit_dpda_move(q, a, z, q2, push)

    # Suspension: push the checkpoint, then the grammar axiom, and parse.
    for q in x.finals:
        for sigma_ in wild:
            for t in x_syms + [_BOTTOM]:
                emit(_try(q), sigma_, t, Move(work, (axiom_sym, _cp(q)), DOWN))
        # Resume (suffix rejected): head returns to the suspension cell.
        for sigma_ in wild:
            emit(fail_state, sigma_, _cp(q), Move(_go(q), (), UP))
            if sigma_ != RIGHT_MARK:
                emit(ok_state, sigma_, _cp(q), Move(_go(q), (), UP))
        # Suffix parsed to the end: drain and accept.
        emit(ok_state, RIGHT_MARK, _cp(q), Move(_DRAIN, (), DOWN))
    gamma = [_BOTTOM] + x_syms + [_cp(q) for q in x.finals] + [
        z for z in y.stack_alphabet if z != y.bottom
    ]
    for z in gamma:
        emit(_DRAIN, RIGHT_MARK, z, Move(_DRAIN, (), DOWN))

    machine = Machine(
        states=tuple(states + [q for q in y.states]),
        input_alphabet=tuple(sigma),
        stack_alphabet=tuple(gamma),
        finals=(_DRAIN,),
        initial_state=_INIT,
        bottom=_BOTTOM,
        delta=delta,
        two_way=False,
        meta=((META_KIND, "concat-dcfl"),),
    )
    return desugar_hat_moves(machine)
