"""Parser for the grammar file format.

One rule per line, ``Name <- body``.  Terminals are single characters in
double quotes, ``""`` is the empty word.  Operators, loosest to tightest:
``/`` ordered choice, juxtaposition for sequence, prefix ``!`` and ``&``,
postfix ``*`` ``+`` ``?``.  ``.`` matches any letter, ``(...)`` groups and
``#`` starts a comment.  The first rule's left-hand side is the axiom
unless a ``@start Name`` line appears; ``@alphabet "abc"`` declares extra
letters.  Names are identifiers; generated names that are not identifiers
are written between backquotes.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import GrammarTextError
from .ast import (
    And,
    AnyChar,
    Choice,
    Empty,
    Expression,
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


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident name string op
    text: str
    col: int


_OPS = set("/!&*+?.()")


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            break
        col = i + 1
        if ch == "<" and line.startswith("<-", i):
            toks.append(_Tok("arrow", "<-", col))
            i += 2
        elif ch == '"':
            j = line.find('"', i + 1)
            if j < 0:
                raise GrammarTextError("unterminated string literal", lineno, col)
            body = line[i + 1 : j]
            if len(body) > 1:
                raise GrammarTextError(
                    f"terminals are single characters, got {body!r}", lineno, col
                )
            toks.append(_Tok("string", body, col))
            i = j + 1
        elif ch == "`":
            j = line.find("`", i + 1)
            if j < 0:
                raise GrammarTextError("unterminated backquoted name", lineno, col)
            if j == i + 1:
                raise GrammarTextError("empty backquoted name", lineno, col)
            toks.append(_Tok("name", line[i + 1 : j], col))
            i = j + 1
        elif ch in _OPS:
            toks.append(_Tok("op", ch, col))
            i += 1
        elif ch.isalnum() or ch == "_":
            j = i
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            toks.append(_Tok("ident", line[i:j], col))
            i = j
        else:
            raise GrammarTextError(f"unexpected character {ch!r}", lineno, col)
    return toks


class _ExprParser:
    def __init__(self, toks: list[_Tok], lineno: int):
        self.toks = toks
        self.pos = 0
        self.lineno = lineno

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def error(self, msg: str) -> GrammarTextError:
        tok = self.peek()
        col = tok.col if tok else (self.toks[-1].col if self.toks else 1)
        return GrammarTextError(msg, self.lineno, col)

    def parse(self) -> Expression:
        e = self.choice()
        if self.peek() is not None:
            raise self.error(f"trailing input at {self.peek().text!r}")
        return e

    def choice(self) -> Expression:
        parts = [self.sequence()]
        while (tok := self.peek()) and tok.kind == "op" and tok.text == "/":
            self.pos += 1
            parts.append(self.sequence())
        e = parts[-1]
        for part in reversed(parts[:-1]):
            e = Choice(part, e)
        return e

    def sequence(self) -> Expression:
        parts = [self.prefix()]
        while (tok := self.peek()) is not None and self._starts_prefix(tok):
            parts.append(self.prefix())
        e = parts[-1]
        for part in reversed(parts[:-1]):
            e = Sequence(part, e)
        return e

    @staticmethod
    def _starts_prefix(tok: _Tok) -> bool:
        if tok.kind in ("ident", "name", "string"):
            return True
        return tok.kind == "op" and tok.text in "!&.("

    def prefix(self) -> Expression:
        tok = self.peek()
        if tok and tok.kind == "op" and tok.text in "!&":
            self.pos += 1
            inner = self.prefix()
            return Not(inner) if tok.text == "!" else And(inner)
        return self.postfix()

    def postfix(self) -> Expression:
        e = self.atom()
        while (tok := self.peek()) and tok.kind == "op" and tok.text in "*+?":
            self.pos += 1
            e = {"*": Star, "+": Plus, "?": Option}[tok.text](e)
        return e

    def atom(self) -> Expression:
        tok = self.peek()
        if tok is None:
            raise self.error("expected an expression")
        if tok.kind == "string":
            self.pos += 1
            return Empty() if tok.text == "" else Terminal(tok.text)
        if tok.kind in ("ident", "name"):
            self.pos += 1
            return Nonterminal(tok.text)
        if tok.kind == "op" and tok.text == ".":
            self.pos += 1
            return AnyChar()
        if tok.kind == "op" and tok.text == "(":
            self.pos += 1
            e = self.choice()
            closing = self.peek()
            if not (closing and closing.kind == "op" and closing.text == ")"):
                raise self.error("expected ')'")
            self.pos += 1
            return e
        raise self.error(f"unexpected token {tok.text!r}")


def _strip_comment(line: str) -> str:
    """Drop a ``#`` comment, ignoring ``#`` inside quotes or backquotes."""
    quote: str | None = None
    for i, ch in enumerate(line):
        if quote is not None:
            if ch == quote:
                quote = None
        elif ch in ('"', "`"):
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def parse_grammar_text(text: str) -> Grammar:
    """Parse grammar source into a validated :class:`Grammar`."""
    rules: list[tuple[str, Expression]] = []
    seen: set[str] = set()
    declared: list[str] = []
    start: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.lstrip().startswith("@"):
            stripped = _strip_comment(raw).strip()
            if stripped.startswith("@start"):
                arg = stripped[len("@start") :].strip()
                if arg.startswith("`") and arg.endswith("`") and len(arg) > 2:
                    arg = arg[1:-1]
                if not arg:
                    raise GrammarTextError("@start needs a name", lineno, 1)
                start = arg
            elif stripped.startswith("@alphabet"):
                arg = stripped[len("@alphabet") :].strip()
                if not (len(arg) >= 2 and arg[0] == '"' and arg[-1] == '"'):
                    raise GrammarTextError('@alphabet needs a quoted string', lineno, 1)
                for ch in arg[1:-1]:
                    if ch not in declared:
                        declared.append(ch)
            else:
                raise GrammarTextError(f"unknown directive {stripped.split()[0]}", lineno, 1)
            continue
        toks = _tokenize(raw, lineno)
        if not toks:
            continue
        head = toks[0]
        if head.kind not in ("ident", "name"):
            raise GrammarTextError("rule must start with a name", lineno, head.col)
        if len(toks) < 2 or toks[1].kind != "arrow":
            raise GrammarTextError("expected '<-' after rule name", lineno, head.col)
        if head.text in seen:
            raise GrammarTextError(f"duplicate rule for {head.text!r}", lineno, head.col)
        seen.add(head.text)
        body = _ExprParser(toks[2:], lineno).parse()
        rules.append((head.text, body))
    if not rules:
        raise GrammarTextError("no rules found", 0, 0)
    if start is not None and start not in seen:
        raise GrammarTextError(f"@start names unknown rule {start!r}", 0, 0)
    for name, body in rules:
        for ref in references_of(body):
            if ref not in seen:
                raise GrammarTextError(f"undefined nonterminal {ref!r} in rule {name!r}", 0, 0)
    return Grammar.build(rules, axiom=start, alphabet=declared)
