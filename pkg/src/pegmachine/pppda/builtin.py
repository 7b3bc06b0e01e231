"""Built-in machines used by the CLI, benchmarks and tests."""

from __future__ import annotations

from .machine import DOWN, HAT_RIGHT, LEFT_MARK, Machine, Move, RIGHT, RIGHT_MARK, UP


def builtin_anbncn() -> Machine:
    """Three-state machine recognizing a^n b^n c^n for n >= 1.

    The first pass checks the a/b balance against the stack, popping ``up``
    on the first ``c`` to rewind the head; the second pass skips the ``a``
    block and checks the b/c balance.
    """
    delta = {
        ("q0", LEFT_MARK, "Z0"): Move("q0", ("Y",), RIGHT),
        ("q0", "a", "Y"): Move("q0", ("X",), RIGHT),
        ("q0", "a", "X"): Move("q0", ("X",), RIGHT),
        ("q0", "b", "X"): Move("q0", (), RIGHT),
        ("q0", "c", "Y"): Move("q1", (), UP),
        ("q1", "a", "Z0"): Move("q1", (), HAT_RIGHT),
        ("q1", "b", "Z0"): Move("q1", ("X",), RIGHT),
        ("q1", "b", "X"): Move("q1", ("X",), RIGHT),
        ("q1", "c", "X"): Move("q1", (), RIGHT),
        ("q1", RIGHT_MARK, "Z0"): Move("qf", (), DOWN),
    }
    return Machine(
        states=("q0", "q1", "qf"),
        input_alphabet=("a", "b", "c"),
        stack_alphabet=("Z0", "Y", "X"),
        finals=("qf",),
        initial_state="q0",
        bottom="Z0",
        delta=delta,
        two_way=False,
    )


def builtin_loop() -> Machine:
    """Two-rule machine that push/pops forever at cell 1 on every input.

    The direct engine burns its whole step budget on it; the memoizing
    engine must reject it by loop detection in constant work regardless of
    input length.
    """
    wild = ("a", RIGHT_MARK)
    delta = {
        ("q", LEFT_MARK, "Z"): Move("h", ("H",), RIGHT),
    }
    for sigma in wild:
        delta[("h", sigma, "H")] = Move("q", (), DOWN)
        delta[("q", sigma, "Z")] = Move("q", ("Z2",), DOWN)
        delta[("q", sigma, "Z2")] = Move("q", (), UP)
    return Machine(
        states=("q", "h"),
        input_alphabet=("a",),
        stack_alphabet=("Z", "H", "Z2"),
        finals=(),
        initial_state="q",
        bottom="Z",
        delta=delta,
        two_way=False,
    )
