"""Machine file format.

Header lines declare the parts, then one transition per line::

    @twoway no
    @states q0 q1 qf
    @initial q0
    @final qf
    @bottom Z0
    @alphabet "abc"
    q0 "<" Z0 -> q0 Y right

The letter slot is a quoted character, or bare ``<`` / ``>`` for the end
markers.  The push string is ``-`` when empty; multiple symbols are
comma-separated, and an unseparated token like ``XY`` is split into
characters when every character is a declared symbol.  Directions are
``left down up right hatleft hatdown hatright``.  ``@meta key value``
lines carry tool annotations and round-trip unchanged.
"""

from __future__ import annotations

from ..errors import MachineTextError
from .machine import (
    CORE_DIRECTIONS,
    HAT_DIRECTIONS,
    LEFT_MARK,
    Machine,
    Move,
    RIGHT_MARK,
)

_DIRS = set(CORE_DIRECTIONS) | set(HAT_DIRECTIONS)


def _parse_letter(tok: str, lineno: int) -> str:
    if tok == "<":
        return LEFT_MARK
    if tok == ">":
        return RIGHT_MARK
    if len(tok) == 3 and tok[0] == '"' and tok[2] == '"':
        return tok[1]
    raise MachineTextError(f"bad letter token {tok!r}", lineno)


def _render_letter(a: str) -> str:
    return a if a in (LEFT_MARK, RIGHT_MARK) else f'"{a}"'


def _split_push(tok: str, gamma: set[str], lineno: int) -> tuple[str, ...]:
    if tok == "-":
        return ()
    if "," in tok:
        parts = tuple(p for p in tok.split(",") if p)
        if not parts:
            raise MachineTextError(f"bad push string {tok!r}", lineno)
        return parts
    if tok in gamma:
        return (tok,)
    if len(tok) > 1 and all(ch in gamma for ch in tok):
        return tuple(tok)
    return (tok,)  # a push may introduce a new symbol


def _render_push(push: tuple[str, ...], declared: set[str]) -> str:
    if not push:
        return "-"
    if len(push) > 1:
        return ",".join(push)
    sym = push[0]
    # A trailing comma keeps a multi-character name from being re-read as a
    # character sequence when all of its characters happen to be symbols.
    if len(sym) > 1 and sym not in declared and all(ch in declared for ch in sym):
        return sym + ","
    return sym


def parse_machine_text(text: str) -> Machine:
    """Parse and validate a machine description."""
    states: list[str] = []
    finals: list[str] = []
    initial: str | None = None
    bottom: str | None = None
    alphabet: list[str] = []
    two_way = False
    meta: list[tuple[str, str]] = []
    body: list[tuple[int, list[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("@"):
            parts = line.split()
            key = parts[0]
            if key == "@states":
                states.extend(parts[1:])
            elif key == "@final":
                finals.extend(parts[1:])
            elif key == "@initial" and len(parts) == 2:
                initial = parts[1]
            elif key == "@bottom" and len(parts) == 2:
                bottom = parts[1]
            elif key == "@alphabet" and len(parts) == 2:
                arg = parts[1]
                if not (len(arg) >= 2 and arg[0] == '"' and arg[-1] == '"'):
                    raise MachineTextError("@alphabet needs a quoted string", lineno)
                for ch in arg[1:-1]:
                    if ch not in alphabet:
                        alphabet.append(ch)
            elif key == "@twoway" and len(parts) == 2 and parts[1] in ("yes", "no"):
                two_way = parts[1] == "yes"
            elif key == "@meta" and len(parts) >= 3:
                meta.append((parts[1], " ".join(parts[2:])))
            elif key == "@kind":
                pass  # consumed by multi-format loaders
            else:
                raise MachineTextError(f"bad directive {line!r}", lineno)
            continue
        body.append((lineno, line.split()))

    if initial is None or bottom is None:
        raise MachineTextError("missing @initial or @bottom header", 0)

    # First pass: collect declared stack symbols so push tokens can be split.
    gamma: list[str] = [bottom]
    for lineno, toks in body:
        if len(toks) != 7 or toks[3] != "->":
            raise MachineTextError(
                "transition must be: state letter stacksym -> state pushstring dir", lineno
            )
        if toks[2] not in gamma:
            gamma.append(toks[2])
    gamma_set = set(gamma)

    delta: dict[tuple[str, str, str], Move] = {}
    state_order: list[str] = list(states)

    def note_state(q: str) -> None:
        if q not in state_order:
            state_order.append(q)

    note_state(initial)
    for q in finals:
        note_state(q)
    for lineno, toks in body:
        q, letter_tok, z, _, q2, push_tok, direction = toks
        a = _parse_letter(letter_tok, lineno)
        if direction not in _DIRS:
            raise MachineTextError(f"bad direction {direction!r}", lineno)
        push = _split_push(push_tok, gamma_set, lineno)
        for sym in push:
            if sym not in gamma_set:
                gamma_set.add(sym)
                gamma.append(sym)
        key = (q, a, z)
        if key in delta:
            raise MachineTextError(f"duplicate transition for {key!r}", lineno)
        if a != LEFT_MARK and a != RIGHT_MARK and a not in alphabet:
            alphabet.append(a)
        note_state(q)
        note_state(q2)
        delta[key] = Move(q2, push, direction)

    return Machine(
        states=tuple(state_order),
        input_alphabet=tuple(alphabet),
        stack_alphabet=tuple(gamma),
        finals=tuple(finals),
        initial_state=initial,
        bottom=bottom,
        delta=delta,
        two_way=two_way,
        meta=tuple(meta),
    )


def render_machine_text(m: Machine) -> str:
    """Deterministic text form, reloadable by :func:`parse_machine_text`."""
    lines = [
        "@twoway " + ("yes" if m.two_way else "no"),
        "@states " + " ".join(m.states),
        "@initial " + m.initial_state,
        "@final " + " ".join(m.finals),
        "@bottom " + m.bottom,
        '@alphabet "' + "".join(m.input_alphabet) + '"',
    ]
    for k, v in m.meta:
        lines.append(f"@meta {k} {v}")
    state_pos = {q: i for i, q in enumerate(m.states)}
    letter_pos = {a: i for i, a in enumerate(m.letters)}
    sym_pos = {z: i for i, z in enumerate(m.stack_alphabet)}
    declared = {m.bottom} | {z for (_, _, z) in m.delta}
    for (q, a, z), mv in sorted(
        m.delta.items(), key=lambda kv: (state_pos[kv[0][0]], letter_pos[kv[0][1]], sym_pos[kv[0][2]])
    ):
        push = _render_push(mv.push, declared)
        lines.append(f"{q} {_render_letter(a)} {z} -> {mv.state} {push} {mv.direction}")
    return "\n".join(lines) + "\n"
