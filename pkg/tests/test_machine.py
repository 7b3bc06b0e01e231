import pytest

from pegmachine.errors import MachineInvariantError, MachineTextError
from pegmachine.pppda import (
    Configuration,
    DOWN,
    Halt,
    LEFT,
    LEFT_MARK,
    Machine,
    Move,
    RIGHT,
    RIGHT_MARK,
    UP,
    builtin_anbncn,
    desugar_hat_moves,
    initial_configuration,
    parse_machine_text,
    render_machine_text,
    run_direct,
    step,
)

ANBNCN_SOURCE = """\
@twoway no
@states q0 q1 qf
@initial q0
@final qf
@bottom Z0
@alphabet "abc"
q0 < Z0 -> q0 Y right
q0 "a" Y -> q0 X right
q0 "a" X -> q0 X right
q0 "b" X -> q0 - right
q0 "c" Y -> q1 - up
q1 "a" Z0 -> q1 - hatright
q1 "b" Z0 -> q1 X right
q1 "b" X -> q1 X right
q1 "c" X -> q1 - right
q1 > Z0 -> qf - down
"""


def test_parse_machine_source_matches_builtin():
    m = parse_machine_text(ANBNCN_SOURCE)
    b = builtin_anbncn()
    assert m.states == b.states == ("q0", "q1", "qf")
    assert m.delta == b.delta
    assert m.bottom == "Z0"


def test_up_with_push_rejected():
    with pytest.raises(MachineInvariantError):
        Machine(
            states=("q", "p"),
            input_alphabet=("a",),
            stack_alphabet=("Z", "X", "Y"),
            finals=(),
            initial_state="q",
            bottom="Z",
            delta={("q", "a", "Z"): Move("p", ("X", "Y"), UP)},
        )


def test_duplicate_transition_rejected():
    with pytest.raises(MachineTextError):
        parse_machine_text(ANBNCN_SOURCE + 'q0 "a" Y -> q0 X right\n')


def test_up_with_push_in_source_rejected():
    bad = '@initial q\n@bottom Z\n@alphabet "a"\nq "a" Z -> p XY up\n'
    with pytest.raises(MachineInvariantError):
        parse_machine_text(bad)


def test_boundary_moves_rejected():
    with pytest.raises(MachineInvariantError):
        Machine(
            states=("q",), input_alphabet=("a",), stack_alphabet=("Z",),
            finals=(), initial_state="q", bottom="Z",
            delta={("q", RIGHT_MARK, "Z"): Move("q", (), RIGHT)},
        )
    with pytest.raises(MachineInvariantError):
        Machine(
            states=("q",), input_alphabet=("a",), stack_alphabet=("Z",),
            finals=(), initial_state="q", bottom="Z",
            delta={("q", LEFT_MARK, "Z"): Move("q", (), LEFT)}, two_way=True,
        )


def test_one_way_forbids_left_moves():
    with pytest.raises(MachineInvariantError):
        Machine(
            states=("q",), input_alphabet=("a",), stack_alphabet=("Z",),
            finals=(), initial_state="q", bottom="Z",
            delta={("q", "a", "Z"): Move("q", (), LEFT)}, two_way=False,
        )


# --- stepping, against the worked run ----------------------------------------


def test_step_initial_push():
    m = builtin_anbncn()
    c0 = initial_configuration(m)
    assert c0 == Configuration("q0", (("Z0", 0),), 0)
    c1 = step(m, c0, "aaabbbccc")
    assert c1 == Configuration("q0", (("Y", 1), ("Z0", 0)), 1)


def test_step_up_pop_returns_to_origin():
    m = builtin_anbncn()
    c = Configuration("q0", (("Y", 1), ("Z0", 0)), 7)
    after = step(m, c, "aaabbbccc")
    assert after == Configuration("q1", (("Z0", 0),), 1)


def test_step_down_pop_keeps_head():
    m = builtin_anbncn()
    c = Configuration("q1", (("Z0", 0),), 10)
    after = step(m, c, "aaabbbccc")
    assert after == Configuration("qf", (), 10)


def test_step_halts_without_transition():
    m = builtin_anbncn()
    c = Configuration("q1", (("Z0", 0),), 1)  # letter a, but hats not expanded
    # Hat moves must be expanded before stepping.
    with pytest.raises(MachineInvariantError):
        step(m, c, "abc")
    md = desugar_hat_moves(m)
    halted = step(md, Configuration("q0", (("X", 2), ("Z0", 0)), 2), "ax")
    assert isinstance(halted, Halt) and halted.reason == "no-transition"


def test_run_outcomes():
    md = desugar_hat_moves(builtin_anbncn())
    assert run_direct(md, "aaabbbccc").outcome == "accept"
    assert run_direct(md, "aabbbccc").outcome == "reject"
    assert run_direct(md, "").outcome == "reject"
    assert run_direct(md, "abc", step_limit=0).outcome == "budget"


def test_final_configuration_of_accepting_run():
    md = desugar_hat_moves(builtin_anbncn())
    run = run_direct(md, "aaabbbccc")
    assert run.final == Configuration("qf", (), 10)


# --- trace invariants -----------------------------------------------------------


def _traced(word):
    md = desugar_hat_moves(builtin_anbncn())
    return md, run_direct(md, word, collect_trace=True)


@pytest.mark.parametrize("word", ["aaabbbccc", "aabbcc", "aabbc", "abca", "cab"])
def test_pointer_discipline_and_pop_directions(word):
    md, run = _traced(word)
    for ev in run.trace:
        if ev.kind == "push":
            # Every new entry's origin is the head right after the move.
            depth_gain = len(ev.after.stack) - len(ev.before.stack)
            assert depth_gain >= 1
            for sym, origin in ev.after.stack[:depth_gain]:
                assert origin == ev.after.head
        else:
            assert len(ev.after.stack) == len(ev.before.stack) - 1
            if ev.pop_direction == UP:
                assert ev.after.head == ev.popped[1]
            elif ev.pop_direction == DOWN:
                assert ev.after.head == ev.before.head


@pytest.mark.parametrize("word", ["aaabbbccc", "aabbcc"])
def test_bottom_popped_only_at_accepting_last_move(word):
    md, run = _traced(word)
    assert run.outcome == "accept"
    for i, ev in enumerate(run.trace):
        bottoms = [s for s, _ in ev.after.stack if s == "Z0"]
        if i < len(run.trace) - 1:
            assert bottoms == ["Z0"]
    assert run.trace[-1].popped[0] == "Z0"


# --- text round trip ------------------------------------------------------------


def test_render_parse_roundtrip():
    md = desugar_hat_moves(builtin_anbncn())
    text = render_machine_text(md)
    again = parse_machine_text(text)
    assert render_machine_text(again) == text


def test_multichar_push_roundtrip():
    m = Machine(
        states=("q", "p"),
        input_alphabet=("a",),
        stack_alphabet=("Z", "X1", "X2"),
        finals=(),
        initial_state="q",
        bottom="Z",
        delta={("q", "a", "Z"): Move("p", ("X1", "X2"), DOWN)},
    )
    again = parse_machine_text(render_machine_text(m))
    assert again.delta[("q", "a", "Z")].push == ("X1", "X2")
