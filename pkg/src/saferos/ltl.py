"""LTL formulas over plain atoms and belief atoms ``B(agent,atom)``.

Surface syntax (as used by property lists)::

    [] f    always          <> f    eventually      ~ f     not
    f & g   and             f | g   or              f -> g  implies
    f U g   until           B(agent,atom)           true / false

Binding, tightest first: unary operators, ``U``, ``&``, ``|``, ``->``
(right associative). :func:`print_ltl` emits a fully parenthesised form
that :func:`parse_ltl` reads back to the identical tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator


class Formula:
    """Base class for LTL syntax trees."""

    def children(self) -> tuple[Formula, ...]:
        return ()


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class BeliefAtom(Formula):
    agent: str
    atom: str


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Globally(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Finally(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


# Only exists so that it can be rejected; nothing in this package produces it.
@dataclass(frozen=True)
class Next(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


TRUE = Const(True)
FALSE = Const(False)

LEAVES = (Const, Atom, BeliefAtom)

_UNARY_SYMBOL = {Not: "~", Globally: "[]", Finally: "<>", Next: "X"}
_BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->", Until: "U"}


class LtlSyntaxError(SyntaxError):
    pass


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over every node of the tree."""
    yield f
    for c in f.children():
        yield from subformulas(c)


def propositions(f: Formula) -> set[Formula]:
    return {g for g in subformulas(f) if isinstance(g, (Atom, BeliefAtom))}


def contains_next(f: Formula) -> bool:
    return any(isinstance(g, Next) for g in subformulas(f))


def map_leaves(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """Rebuild the tree with every leaf replaced by ``fn(leaf)``."""
    if isinstance(f, LEAVES):
        return fn(f)
    return type(f)(*(map_leaves(c, fn) for c in f.children()))


def print_ltl(f: Formula) -> str:
    match f:
        case Const(value):
            return "true" if value else "false"
        case Atom(name):
            return name
        case BeliefAtom(agent, atom):
            return f"B({agent},{atom})"
        case Not() | Globally() | Finally() | Next():
            return f"{_UNARY_SYMBOL[type(f)]} ({print_ltl(f.operand)})"
        case And() | Or() | Implies() | Until():
            return f"({print_ltl(f.left)}) {_BINARY_SYMBOL[type(f)]} ({print_ltl(f.right)})"
    raise TypeError(f"not an LTL formula: {f!r}")


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op>\[\]|<>|->|[~!&|(),]|U(?![A-Za-z0-9_]))|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))"
)


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m.group("bad"):
            raise LtlSyntaxError(f"unexpected character {m.group('bad')!r} at offset {m.start('bad')}")
        tok = m.group("op") or m.group("ident")
        toks.append((tok, m.start("op") if m.group("op") else m.start("ident")))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def next(self) -> str:
        if self.i >= len(self.toks):
            raise LtlSyntaxError(f"unexpected end of formula in {self.text!r}")
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise LtlSyntaxError(f"expected {tok!r}, got {got!r} in {self.text!r}")

    def parse(self) -> Formula:
        f = self.implies()
        if self.peek() is not None:
            raise LtlSyntaxError(f"trailing input {self.peek()!r} in {self.text!r}")
        return f

    def implies(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.until()
        while self.peek() == "&":
            self.next()
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        left = self.unary()
        if self.peek() == "U":
            self.next()
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in ("~", "!"):
            self.next()
            return Not(self.unary())
        if tok == "[]":
            self.next()
            return Globally(self.unary())
        if tok == "<>":
            self.next()
            return Finally(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.next()
        if tok == "(":
            f = self.implies()
            self.expect(")")
            return f
        if tok == "B" and self.peek() == "(":
            self.next()
            agent = self.ident()
            self.expect(",")
            atom = self.ident()
            self.expect(")")
            return BeliefAtom(agent, atom)
        if tok in ("true", "True"):
            return TRUE
        if tok in ("false", "False"):
            return FALSE
        if re.fullmatch(r"[a-z_][A-Za-z0-9_]*", tok):
            return Atom(tok)
        raise LtlSyntaxError(f"unexpected token {tok!r} in {self.text!r}")

    def ident(self) -> str:
        tok = self.next()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise LtlSyntaxError(f"expected identifier, got {tok!r} in {self.text!r}")
        return tok


def parse_ltl(text: str) -> Formula:
    return _Parser(text).parse()
