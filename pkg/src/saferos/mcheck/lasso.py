"""Direct LTL semantics on lasso words ``stem + loop^omega``.

This evaluator works position by position on the finite lasso and shares
nothing with the automaton construction, so it can certify counterexamples.
"""

from __future__ import annotations

from typing import Callable, Sequence

from saferos.ltl import (
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
)

Letter = frozenset  # set of propositions that are true at a position


def evaluate_all(
    f: Formula,
    stem: Sequence[Letter],
    loop: Sequence[Letter],
    holds: Callable[[Formula, Letter], bool] | None = None,
) -> dict[Formula, list[bool]]:
    """Truth value of every subformula of ``f`` at every lasso position."""
    if not loop:
        raise ValueError("loop must be non-empty")
    word = list(stem) + list(loop)
    n, start = len(word), len(stem)
    holds = holds or (lambda p, letter: p in letter)
    succ = [i + 1 if i + 1 < n else start for i in range(n)]
    # From position i the run visits exactly the positions min(i, start)..n-1 again and again.
    future = [range(min(i, start), n) for i in range(n)]
    table: dict[Formula, list[bool]] = {}

    def sat(g: Formula) -> list[bool]:
        if g in table:
            return table[g]
        match g:
            case Const(v):
                val = [v] * n
            case Atom() | BeliefAtom():
                val = [holds(g, word[i]) for i in range(n)]
            case Not(a):
                val = [not x for x in sat(a)]
            case And(a, b):
                val = [x and y for x, y in zip(sat(a), sat(b))]
            case Or(a, b):
                val = [x or y for x, y in zip(sat(a), sat(b))]
            case Implies(a, b):
                val = [(not x) or y for x, y in zip(sat(a), sat(b))]
            case Next(a):
                sa = sat(a)
                val = [sa[succ[i]] for i in range(n)]
            case Globally(a):
                sa = sat(a)
                val = [all(sa[j] for j in future[i]) for i in range(n)]
            case Finally(a):
                sa = sat(a)
                val = [any(sa[j] for j in future[i]) for i in range(n)]
            case Until(a, b):
                sa, sb = sat(a), sat(b)
                val = [False] * n
                changed = True
                while changed:
                    changed = False
                    for i in reversed(range(n)):
                        v = sb[i] or (sa[i] and val[succ[i]])
                        if v != val[i]:
                            val[i] = v
                            changed = True
            case _:
                raise TypeError(f"not an LTL formula: {g!r}")
        table[g] = val
        return val

    sat(f)
    return table


def evaluate(
    f: Formula,
    stem: Sequence[Letter],
    loop: Sequence[Letter],
    holds: Callable[[Formula, Letter], bool] | None = None,
) -> bool:
    """Does ``stem + loop^omega`` satisfy ``f`` at its first position?"""
    return evaluate_all(f, stem, loop, holds)[f][0]
