"""Grammar rewrites: desugaring, normal-form conversion, acceptance-mode wrappers.

Fresh nonterminals introduced by the rewrites are named ``#k`` where ``k``
is the node id of the originating node in the input grammar, so output is
deterministic and golden-testable.  ``#`` is not a legal character in
user-written names, which makes collisions impossible.
"""

from __future__ import annotations

from ..errors import NotCoreError
from .ast import (
    And,
    AnyChar,
    Choice,
    CnfGrammar,
    Empty,
    Expression,
    Fail,
    Grammar,
    Nonterminal,
    Not,
    Option,
    Plus,
    Sequence,
    Star,
    Terminal,
    references_of,
)
from .wellformed import require_well_formed


def desugar(g: Grammar) -> Grammar:
    """Rewrite sugar forms into the core forms.

    Star and Plus loops become fresh rules (``e*`` turns into ``#k`` with
    ``#k <- e #k / ""``); Option, And, AnyChar and Fail are expanded in
    place.  Core-only grammars come back unchanged up to node renumbering.
    """
    fresh: list[tuple[str, Expression]] = []
    sigma = g.alphabet

    def rewrite(e: Expression) -> Expression:
        if isinstance(e, (Empty, Terminal, Nonterminal)):
            return e
        if isinstance(e, Sequence):
            return Sequence(rewrite(e.left), rewrite(e.right))
        if isinstance(e, Choice):
            return Choice(rewrite(e.first), rewrite(e.second))
        if isinstance(e, Not):
            return Not(rewrite(e.inner))
        if isinstance(e, And):
            return Not(Not(rewrite(e.inner)))
        if isinstance(e, Option):
            return Choice(rewrite(e.inner), Empty())
        if isinstance(e, Star):
            name = f"#{e.nid}"
            fresh.append((name, Choice(Sequence(rewrite(e.inner), Nonterminal(name)), Empty())))
            return Nonterminal(name)
        if isinstance(e, Plus):
            # e+ is e e*; rewrite the body once and reference it twice (the
            # grammar builder renumbers, so sharing the tree is fine).
            name = f"#{e.nid}"
            inner = rewrite(e.inner)
            fresh.append((name, Choice(Sequence(inner, Nonterminal(name)), Empty())))
            return Sequence(inner, Nonterminal(name))
        if isinstance(e, AnyChar):
            if not sigma:
                return Not(Empty())
            out: Expression = Terminal(sigma[-1])
            for ch in reversed(sigma[:-1]):
                out = Choice(Terminal(ch), out)
            return out
        if isinstance(e, Fail):
            return Not(Empty())
        raise TypeError(f"unknown expression node {e!r}")

    rules = [(name, rewrite(g.rules[name])) for name in g.nonterminals]
    return Grammar.build(rules + fresh, axiom=g.axiom, alphabet=sigma)


_EPS_NT = "#u"
_FRESH_AXIOM = "#ax"


def to_cnf(g: Grammar) -> CnfGrammar:
    """Convert a core-only, well-formed grammar to the normal-form shapes.

    Long sequences and choices are right-folded into fresh bracket rules,
    bare terminals / empties / negations inside composite bodies are lifted
    into fresh rules, unit rules ``A <- B`` are padded to ``A <- B #u`` with
    ``#u <- ""``, and a fresh axiom wrapping the old one is added whenever
    the old axiom occurs on a right-hand side.  Acceptance is preserved.
    """
    if not g.is_core:
        raise NotCoreError("to_cnf needs a core-only grammar; desugar first")
    require_well_formed(g)

    fresh: list[tuple[str, Expression]] = []
    fresh_names: set[str] = set()
    needs_eps = False

    def lift(e: Expression) -> Nonterminal:
        """Name the subexpression ``e`` so it can sit inside a binary body."""
        if isinstance(e, Nonterminal):
            return Nonterminal(e.name)
        # "#c" keeps these names disjoint from desugar's "#k" rules, which may
        # survive in the input grammar.
        name = f"#c{e.nid}"
        if name not in fresh_names:
            fresh_names.add(name)
            fresh.append((name, convert(e)))
        return Nonterminal(name)

    def convert(e: Expression) -> Expression:
        nonlocal needs_eps
        if isinstance(e, (Terminal, Empty)):
            return e
        if isinstance(e, Nonterminal):
            needs_eps = True
            return Sequence(Nonterminal(e.name), Nonterminal(_EPS_NT))
        if isinstance(e, Sequence):
            return Sequence(lift(e.left), lift(e.right))
        if isinstance(e, Choice):
            return Choice(lift(e.first), lift(e.second))
        if isinstance(e, Not):
            return Not(lift(e.inner))
        raise NotCoreError(f"unexpected node {e!r}")

    rules = [(name, convert(g.rules[name])) for name in g.nonterminals]
    rules += fresh
    if needs_eps:
        rules.append((_EPS_NT, Empty()))

    axiom = g.axiom
    if any(axiom in references_of(body) for _, body in rules):
        rules.append((_FRESH_AXIOM, Sequence(Nonterminal(axiom), Nonterminal(_EPS_NT))))
        if not needs_eps:
            rules.append((_EPS_NT, Empty()))
        axiom = _FRESH_AXIOM
    return CnfGrammar.build(rules, axiom=axiom, alphabet=g.alphabet)


TO_FULL_MATCH = "to-full-match-mode"
TO_PREFIX = "to-prefix-mode"


def convert_acceptance(g: Grammar, direction: str) -> Grammar:
    """Wrap the axiom to move between whole-input and prefix acceptance.

    ``to-full-match-mode`` adds ``#full <- S !.`` so the run succeeds only
    when the old axiom consumed the whole input; ``to-prefix-mode`` adds
    ``#prefix <- S .*`` so any input whose prefix the old axiom matches is
    accepted with the remainder swallowed.
    """
    if direction == TO_FULL_MATCH:
        wrapper = ("#full", Sequence(Nonterminal(g.axiom), Not(AnyChar())))
    elif direction == TO_PREFIX:
        wrapper = ("#prefix", Sequence(Nonterminal(g.axiom), Star(AnyChar())))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    rules = [wrapper] + [(name, g.rules[name]) for name in g.nonterminals]
    return Grammar.build(rules, axiom=wrapper[0], alphabet=g.alphabet)
