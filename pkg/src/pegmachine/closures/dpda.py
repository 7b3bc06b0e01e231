"""Classical deterministic pushdown automata (acceptance by final state).

A move replaces the inspected top symbol with a string (top first); the
letter slot is either an input letter or epsilon, and determinism forbids
a letter move and an epsilon move on the same (state, symbol) pair.  A
word is accepted when, after consuming all of it, the run passes through
a final state.

Runs are budgeted: between two consumed letters at most
``64 * (remaining + 1)`` epsilon moves are allowed, so machines whose
epsilon behaviour loops report budget exhaustion instead of hanging;
callers treat that as non-acceptance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..errors import MachineInvariantError, MachineTextError

EPSILON = ""

ACCEPT, REJECT, BUDGET = "accept", "reject", "budget"

EPS_MOVE_FACTOR = 64


@dataclass(frozen=True)
class Dpda:
    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    stack_alphabet: tuple[str, ...]
    finals: tuple[str, ...]
    initial_state: str
    bottom: str
    # (state, letter or EPSILON, top) -> (state, replacement for top, top first)
    delta: Mapping[tuple[str, str, str], tuple[str, tuple[str, ...]]]

    def __post_init__(self) -> None:
        states = set(self.states)
        gamma = set(self.stack_alphabet)
        sigma = set(self.input_alphabet)
        if self.initial_state not in states or not set(self.finals) <= states:
            raise MachineInvariantError("unknown state in DPDA description")
        if self.bottom not in gamma:
            raise MachineInvariantError("unknown bottom symbol")
        for (q, a, z), (q2, push) in self.delta.items():
            if q not in states or q2 not in states:
                raise MachineInvariantError(f"unknown state in move at {(q, a, z)!r}")
            if z not in gamma or not set(push) <= gamma:
                raise MachineInvariantError(f"unknown stack symbol at {(q, a, z)!r}")
            if a != EPSILON and a not in sigma:
                raise MachineInvariantError(f"unknown letter {a!r}")
            if a != EPSILON and (q, EPSILON, z) in self.delta:
                raise MachineInvariantError(
                    f"letter move and epsilon move coexist on ({q!r}, {z!r})"
                )


def dpda_run(d: Dpda, word: str, step_limit: int | None = None) -> str:
    """Run ``d`` on ``word``; returns accept, reject or budget."""
    state = d.initial_state
    stack = [d.bottom]
    pos = 0
    n = len(word)
    eps_run = 0
    steps = 0
    while True:
        if pos == n and state in d.finals:
            return ACCEPT
        if not stack:
            return REJECT
        top = stack[-1]
        mv = d.delta.get((state, word[pos], top)) if pos < n else None
        if mv is not None:
            eps_run = 0
            pos += 1
        else:
            mv = d.delta.get((state, EPSILON, top))
            if mv is None:
                return REJECT
            eps_run += 1
            if eps_run > EPS_MOVE_FACTOR * (n - pos + 1):
                return BUDGET
        steps += 1
        if step_limit is not None and steps > step_limit:
            return BUDGET
        state, push = mv
        stack.pop()
        stack.extend(reversed(push))


# --- file format ---------------------------------------------------------------


def parse_dpda_text(text: str) -> Dpda:
    """Parse ``@kind dpda`` files: transitions ``state letter sym -> state push``.

    The letter is a quoted character or ``eps``; the push string replaces
    the inspected symbol, ``-`` for nothing, comma separation for
    multi-character symbol names.
    """
    finals: list[str] = []
    initial: str | None = None
    bottom: str | None = None
    alphabet: list[str] = []
    states: list[str] = []
    body: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("@"):
            parts = line.split()
            key = parts[0]
            if key == "@kind":
                if parts[1:] != ["dpda"]:
                    raise MachineTextError("expected '@kind dpda'", lineno)
            elif key == "@states":
                states.extend(parts[1:])
            elif key == "@final":
                finals.extend(parts[1:])
            elif key == "@initial" and len(parts) == 2:
                initial = parts[1]
            elif key == "@bottom" and len(parts) == 2:
                bottom = parts[1]
            elif key == "@alphabet" and len(parts) == 2 and parts[1][0] == '"':
                for ch in parts[1][1:-1]:
                    if ch not in alphabet:
                        alphabet.append(ch)
            else:
                raise MachineTextError(f"bad directive {line!r}", lineno)
            continue
        body.append((lineno, line.split()))
    if initial is None or bottom is None:
        raise MachineTextError("missing @initial or @bottom header", 0)

    gamma: list[str] = [bottom]
    for lineno, toks in body:
        if len(toks) != 6 or toks[3] != "->":
            raise MachineTextError(
                "transition must be: state letter stacksym -> state pushstring", lineno
            )
        if toks[2] not in gamma:
            gamma.append(toks[2])
    gamma_set = set(gamma)

    delta: dict[tuple[str, str, str], tuple[str, tuple[str, ...]]] = {}
    order = list(states)

    def note(q: str) -> None:
        if q not in order:
            order.append(q)

    note(initial)
    for q in finals:
        note(q)
    for lineno, toks in body:
        q, letter_tok, z, _, q2, push_tok = toks
        if letter_tok == "eps":
            a = EPSILON
        elif len(letter_tok) == 3 and letter_tok[0] == '"' and letter_tok[2] == '"':
            a = letter_tok[1]
            if a not in alphabet:
                alphabet.append(a)
        else:
            raise MachineTextError(f"bad letter token {letter_tok!r}", lineno)
        if push_tok == "-":
            push: tuple[str, ...] = ()
        elif "," in push_tok:
            push = tuple(p for p in push_tok.split(",") if p)
        elif push_tok in gamma_set:
            push = (push_tok,)
        elif len(push_tok) > 1 and all(ch in gamma_set for ch in push_tok):
            push = tuple(push_tok)
        else:
            push = (push_tok,)
        for sym in push:
            if sym not in gamma_set:
                gamma_set.add(sym)
                gamma.append(sym)
        key = (q, a, z)
        if key in delta:
            raise MachineTextError(f"duplicate transition for {key!r}", lineno)
        note(q)
        note(q2)
        delta[key] = (q2, push)
    return Dpda(
        states=tuple(order),
        input_alphabet=tuple(alphabet),
        stack_alphabet=tuple(gamma),
        finals=tuple(finals),
        initial_state=initial,
        bottom=bottom,
        delta=delta,
    )


def render_dpda_text(d: Dpda) -> str:
    lines = [
        "@kind dpda",
        "@states " + " ".join(d.states),
        "@initial " + d.initial_state,
        "@final " + " ".join(d.finals),
        "@bottom " + d.bottom,
        '@alphabet "' + "".join(d.input_alphabet) + '"',
    ]
    spos = {q: i for i, q in enumerate(d.states)}
    lpos = {a: i for i, a in enumerate(d.input_alphabet)}
    zpos = {z: i for i, z in enumerate(d.stack_alphabet)}
    declared = {d.bottom} | {z for (_, _, z) in d.delta}
    for (q, a, z), (q2, push) in sorted(
        d.delta.items(),
        key=lambda kv: (spos[kv[0][0]], -1 if kv[0][1] == EPSILON else lpos[kv[0][1]], zpos[kv[0][2]]),
    ):
        letter = "eps" if a == EPSILON else f'"{a}"'
        if not push:
            push_tok = "-"
        elif len(push) > 1:
            push_tok = ",".join(push)
        elif len(push[0]) > 1 and push[0] not in declared and all(c in declared for c in push[0]):
            push_tok = push[0] + ","
        else:
            push_tok = push[0]
        lines.append(f"{q} {letter} {z} -> {q2} {push_tok}")
    return "\n".join(lines) + "\n"
