"""LTL to Büchi automata via tableau expansion.

The formula is put in negation normal form, expanded into a generalized
Büchi automaton with the classic on-the-fly tableau (nodes carry the
obligations for now and for the next step), and degeneralized with a
round-robin counter. Automata are state-labelled: a run reads letter i
while sitting in state i, so every transition into ``t`` is guarded by
``label[t]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from saferos.ltl import (
    FALSE,
    TRUE,
    And,
    Atom,
    BeliefAtom,
    Const,
    Finally,
    Formula,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    Until,
    print_ltl,
)


class UnsupportedOperator(ValueError):
    pass


@dataclass(frozen=True)
class Release(Formula):
    """Dual of until; only appears inside the translation."""

    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


def negate(f: Formula) -> Formula:
    return nnf(Not(f))


def nnf(f: Formula) -> Formula:
    """Negation normal form over Const, propositions, Not(prop), And, Or, Until, Release."""
    match f:
        case Const() | Atom() | BeliefAtom():
            return f
        case Next():
            raise UnsupportedOperator("the next operator is not supported")
        case And(a, b):
            return And(nnf(a), nnf(b))
        case Or(a, b):
            return Or(nnf(a), nnf(b))
        case Implies(a, b):
            return Or(negate(a), nnf(b))
        case Globally(a):
            return Release(FALSE, nnf(a))
        case Finally(a):
            return Until(TRUE, nnf(a))
        case Until(a, b):
            return Until(nnf(a), nnf(b))
        case Release(a, b):
            return Release(nnf(a), nnf(b))
        case Not(g):
            match g:
                case Const(v):
                    return Const(not v)
                case Atom() | BeliefAtom():
                    return f
                case Not(h):
                    return nnf(h)
                case Next():
                    raise UnsupportedOperator("the next operator is not supported")
                case And(a, b):
                    return Or(negate(a), negate(b))
                case Or(a, b):
                    return And(negate(a), negate(b))
                case Implies(a, b):
                    return And(nnf(a), negate(b))
                case Globally(a):
                    return Until(TRUE, negate(a))
                case Finally(a):
                    return Release(FALSE, negate(a))
                case Until(a, b):
                    return Release(negate(a), negate(b))
                case Release(a, b):
                    return Until(negate(a), negate(b))
    raise TypeError(f"not an LTL formula: {f!r}")


@dataclass(frozen=True)
class Guard:
    """Conjunction of literals: every ``pos`` proposition true, every ``neg`` false."""

    pos: frozenset[Formula] = frozenset()
    neg: frozenset[Formula] = frozenset()

    def __call__(self, valuation: Iterable[Formula]) -> bool:
        valuation = valuation if isinstance(valuation, (set, frozenset)) else set(valuation)
        return self.pos <= valuation and not (self.neg & valuation)

    def __str__(self) -> str:
        lits = sorted(print_ltl(p) for p in self.pos) + sorted("~" + print_ltl(n) for n in self.neg)
        return " & ".join(lits) if lits else "true"


@dataclass
class BuchiAutomaton:
    states: list[int]
    initial: list[int]
    succ: dict[int, list[int]]
    label: dict[int, Guard]
    accepting: frozenset[int]

    def transitions(self, state: int) -> list[tuple[Guard, int]]:
        return [(self.label[t], t) for t in self.succ[state]]

    def initial_transitions(self) -> list[tuple[Guard, int]]:
        return [(self.label[t], t) for t in self.initial]


# -- tableau ------------------------------------------------------------------

_INIT = -1


def _key(f: Formula) -> str:
    return repr(f)


def _is_literal(f: Formula) -> bool:
    return isinstance(f, (Const, Atom, BeliefAtom)) or (
        isinstance(f, Not) and isinstance(f.operand, (Atom, BeliefAtom))
    )


def _complement(lit: Formula) -> Formula:
    if isinstance(lit, Not):
        return lit.operand
    if isinstance(lit, Const):
        return Const(not lit.value)
    return Not(lit)


@dataclass
class _Node:
    id: int
    incoming: set[int]
    new: set[Formula]
    old: set[Formula] = field(default_factory=set)
    next: set[Formula] = field(default_factory=set)


class _Tableau:
    def __init__(self) -> None:
        self.nodes: list[_Node] = []
        self.counter = 0

    def fresh(self, incoming: set[int], new: set[Formula], old=(), nxt=()) -> _Node:
        node = _Node(self.counter, set(incoming), set(new), set(old), set(nxt))
        self.counter += 1
        return node

    def expand(self, node: _Node) -> None:
        work = [node]
        while work:
            node = work.pop()
            if not node.new:
                for other in self.nodes:
                    if other.old == node.old and other.next == node.next:
                        other.incoming |= node.incoming
                        break
                else:
                    self.nodes.append(node)
                    work.append(self.fresh({node.id}, node.next))
                continue
            eta = min(node.new, key=_key)
            node.new.discard(eta)
            if _is_literal(eta):
                if eta == FALSE or _complement(eta) in node.old:
                    continue
                # TRUE is kept in old too: an until whose right side is TRUE is met by it.
                node.old.add(eta)
                work.append(node)
            elif isinstance(eta, And):
                node.old.add(eta)
                node.new |= {eta.left, eta.right} - node.old
                work.append(node)
            else:
                if isinstance(eta, Until):
                    first_new, first_next = {eta.left}, {eta}
                    second_new = {eta.right}
                elif isinstance(eta, Release):
                    first_new, first_next = {eta.right}, {eta}
                    second_new = {eta.left, eta.right}
                elif isinstance(eta, Or):
                    first_new, first_next = {eta.left}, set()
                    second_new = {eta.right}
                else:
                    raise TypeError(f"unexpected formula in tableau: {eta!r}")
                old = node.old | {eta}
                n1 = self.fresh(node.incoming, node.new | (first_new - old), old, node.next | first_next)
                n2 = self.fresh(node.incoming, node.new | (second_new - old), old, node.next)
                # Pop order: n1 is expanded first.
                work.append(n2)
                work.append(n1)


def _untils(f: Formula) -> list[Until]:
    found: dict[str, Until] = {}

    def walk(g: Formula) -> None:
        if isinstance(g, Until):
            found.setdefault(_key(g), g)
        for c in g.children():
            walk(c)

    walk(f)
    return [found[k] for k in sorted(found)]


def _guard(old: set[Formula]) -> Guard:
    pos = frozenset(g for g in old if isinstance(g, (Atom, BeliefAtom)))
    neg = frozenset(g.operand for g in old if isinstance(g, Not) and isinstance(g.operand, (Atom, BeliefAtom)))
    return Guard(pos, neg)


def ltl_to_buchi(f: Formula) -> BuchiAutomaton:
    """Büchi automaton accepting exactly the words that satisfy ``f``."""
    g = nnf(f)
    tab = _Tableau()
    tab.expand(tab.fresh({_INIT}, {g}))
    nodes = tab.nodes
    ids = [n.id for n in nodes]
    succ = {i: [] for i in ids}
    for n in nodes:
        for src in sorted(n.incoming):
            if src != _INIT:
                succ[src].append(n.id)
    initial = [n.id for n in nodes if _INIT in n.incoming]
    label = {n.id: _guard(n.old) for n in nodes}

    # One acceptance set per until: the obligation is absent or already met.
    acc_sets = [
        frozenset(n.id for n in nodes if u not in n.old or u.right in n.old) for u in _untils(g)
    ]
    if len(acc_sets) <= 1:
        accepting = acc_sets[0] if acc_sets else frozenset(ids)
        return _renumber(ids, initial, {i: sorted(s) for i, s in succ.items()}, label, accepting)

    k = len(acc_sets)
    states = [(i, c) for c in range(k) for i in ids]
    dsucc: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for i, c in states:
        c2 = (c + 1) % k if i in acc_sets[c] else c
        dsucc[(i, c)] = [(j, c2) for j in sorted(succ[i])]
    dlabel = {(i, c): label[i] for i, c in states}
    dinit = [(i, 0) for i in initial]
    daccept = frozenset((i, 0) for i in acc_sets[0])
    return _renumber(states, dinit, dsucc, dlabel, daccept)


def _renumber(states, initial, succ, label, accepting) -> BuchiAutomaton:
    """Keep only states reachable from an initial state and number them 0..n-1."""
    order: dict = {}
    stack = list(reversed(initial))
    while stack:
        s = stack.pop()
        if s in order:
            continue
        order[s] = len(order)
        stack.extend(reversed(succ[s]))
    return BuchiAutomaton(
        states=list(range(len(order))),
        initial=[order[s] for s in initial],
        succ={order[s]: [order[t] for t in succ[s]] for s in order},
        label={order[s]: label[s] for s in order},
        accepting=frozenset(order[s] for s in order if s in accepting),
    )


def accepts(aut: BuchiAutomaton, stem: list, loop: list) -> bool:
    """Does the automaton accept the word stem + loop^omega?

    Letters are sets of true propositions.
    """
    if not loop:
        raise ValueError("loop must be non-empty")
    word = list(stem) + list(loop)
    n, start = len(word), len(stem)
    letters = [frozenset(w) for w in word]

    def nxt(i: int) -> int:
        return i + 1 if i + 1 < n else start

    def succs(node):
        q, i = node
        j = nxt(i)
        return [(t, j) for t in aut.succ[q] if aut.label[t](letters[j])]

    roots = [(q, 0) for q in aut.initial if aut.label[q](letters[0])]
    seen = set()
    stack = list(roots)
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(succs(node))
    for node in seen:
        if node[0] not in aut.accepting:
            continue
        # Accepting node that can reach itself again.
        inner, stack2 = set(), list(succs(node))
        while stack2:
            m = stack2.pop()
            if m == node:
                return True
            if m in inner:
                continue
            inner.add(m)
            stack2.extend(succs(m))
    return False
