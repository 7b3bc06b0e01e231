"""Pointer pushdown automata: model, semantics, file format, normal form."""

from .builtin import builtin_anbncn, builtin_loop
from .machine import (
    ACCEPT,
    BUDGET,
    CORE_DIRECTIONS,
    Configuration,
    DOWN,
    DirectRun,
    HAT_DIRECTIONS,
    HAT_DOWN,
    HAT_LEFT,
    HAT_RIGHT,
    Halt,
    LEFT,
    LEFT_MARK,
    Machine,
    Move,
    REJECT,
    RIGHT,
    RIGHT_MARK,
    TraceEvent,
    UP,
    default_step_limit,
    initial_configuration,
    letter_at,
    run_direct,
    step,
    validate_machine,
)
from .normalize import NEW_BOTTOM, check_normal, desugar_hat_moves, normalize
from .text import parse_machine_text, render_machine_text

__all__ = [
    "ACCEPT",
    "BUDGET",
    "CORE_DIRECTIONS",
    "Configuration",
    "DOWN",
    "DirectRun",
    "HAT_DIRECTIONS",
    "HAT_DOWN",
    "HAT_LEFT",
    "HAT_RIGHT",
    "Halt",
    "LEFT",
    "LEFT_MARK",
    "Machine",
    "Move",
    "NEW_BOTTOM",
    "REJECT",
    "RIGHT",
    "RIGHT_MARK",
    "TraceEvent",
    "UP",
    "builtin_anbncn",
    "builtin_loop",
    "check_normal",
    "default_step_limit",
    "desugar_hat_moves",
    "initial_configuration",
    "letter_at",
    "normalize",
    "parse_machine_text",
    "render_machine_text",
    "run_direct",
    "step",
    "validate_machine",
]
