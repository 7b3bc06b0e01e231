"""Boolean combinators on grammars under whole-input acceptance.

``S !.`` succeeds exactly on the words the axiom consumes entirely, so a
negation of that test followed by ``.*`` recognizes the complement;
ordering it against a second grammar yields union, and guarding with the
double negation yields intersection.  Rules of the operands are
namespaced with ``L:`` / ``R:`` prefixes to avoid capture.
"""

from __future__ import annotations

from ..peg.ast import (
    And,
    AnyChar,
    Choice,
    Expression,
    Grammar,
    Nonterminal,
    Not,
    Sequence,
    Star,
    children,
)


def _rename(e: Expression, prefix: str) -> Expression:
    if isinstance(e, Nonterminal):
        return Nonterminal(prefix + e.name)
    if isinstance(e, Sequence):
        return Sequence(_rename(e.left, prefix), _rename(e.right, prefix))
    if isinstance(e, Choice):
        return Choice(_rename(e.first, prefix), _rename(e.second, prefix))
    kids = children(e)
    if kids:
        return type(e)(_rename(kids[0], prefix))
    return e


def _prefixed_rules(g: Grammar, prefix: str) -> list[tuple[str, Expression]]:
    return [(prefix + name, _rename(g.rules[name], prefix)) for name in g.nonterminals]


def _merged_alphabet(g1: Grammar, g2: Grammar) -> tuple[str, ...]:
    sigma = list(g1.alphabet)
    for ch in g2.alphabet:
        if ch not in sigma:
            sigma.append(ch)
    return tuple(sigma)


def pel_complement(g: Grammar) -> Grammar:
    """Grammar for the complement language over the same alphabet."""
    whole = Sequence(Nonterminal("L:" + g.axiom), Not(AnyChar()))
    body = Sequence(Not(whole), Star(AnyChar()))
    rules = [("#not", body)] + _prefixed_rules(g, "L:")
    return Grammar.build(rules, axiom="#not", alphabet=g.alphabet)


def pel_union(g1: Grammar, g2: Grammar) -> Grammar:
    """Grammar for the union language over the merged alphabet."""
    first = Sequence(Nonterminal("L:" + g1.axiom), Not(AnyChar()))
    body = Choice(first, Nonterminal("R:" + g2.axiom))
    rules = [("#or", body)] + _prefixed_rules(g1, "L:") + _prefixed_rules(g2, "R:")
    return Grammar.build(rules, axiom="#or", alphabet=_merged_alphabet(g1, g2))


def pel_intersection(g1: Grammar, g2: Grammar) -> Grammar:
    """Grammar for the intersection language over the merged alphabet."""
    test = And(Sequence(Nonterminal("L:" + g1.axiom), Not(AnyChar())))
    body = Sequence(test, Nonterminal("R:" + g2.axiom))
    rules = [("#and", body)] + _prefixed_rules(g1, "L:") + _prefixed_rules(g2, "R:")
    return Grammar.build(rules, axiom="#and", alphabet=_merged_alphabet(g1, g2))
