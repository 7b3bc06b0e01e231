"""Parsing expression grammars: AST, analysis, rewrites and recognizers."""

from .ast import (
    And,
    AnyChar,
    Choice,
    CnfGrammar,
    Consumed,
    DIVERGED,
    Diverged,
    Empty,
    Expression,
    FAILURE,
    Fail,
    Failure,
    Grammar,
    Nonterminal,
    Not,
    Option,
    ParseOutcome,
    Plus,
    Sequence,
    Star,
    Terminal,
    cnf_body_shape_ok,
    is_core_expr,
    render_expr,
    render_grammar_text,
    walk,
)
from .interpret import (
    DEFAULT_BUDGET,
    LeftRecursionError,
    accepts,
    interpret_naive,
    interpret_packrat,
)
from .parser import parse_grammar_text
from .transform import TO_FULL_MATCH, TO_PREFIX, convert_acceptance, desugar, to_cnf
from .wellformed import WfReport, check_well_formed, require_well_formed

__all__ = [
    "And",
    "AnyChar",
    "Choice",
    "CnfGrammar",
    "Consumed",
    "DIVERGED",
    "Diverged",
    "DEFAULT_BUDGET",
    "Empty",
    "Expression",
    "FAILURE",
    "Fail",
    "Failure",
    "Grammar",
    "LeftRecursionError",
    "Nonterminal",
    "Not",
    "Option",
    "ParseOutcome",
    "Plus",
    "Sequence",
    "Star",
    "Terminal",
    "TO_FULL_MATCH",
    "TO_PREFIX",
    "WfReport",
    "accepts",
    "check_well_formed",
    "cnf_body_shape_ok",
    "convert_acceptance",
    "desugar",
    "interpret_naive",
    "interpret_packrat",
    "is_core_expr",
    "parse_grammar_text",
    "render_expr",
    "render_grammar_text",
    "require_well_formed",
    "to_cnf",
    "walk",
]
