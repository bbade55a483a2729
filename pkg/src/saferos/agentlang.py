"""A small Gwendolen-style BDI language.

Concrete syntax::

    GWENDOLEN
    :name: agilex_agent
    :percepts: too_close          (optional)
    :Plans:
    +too_close: {True} <-
        stop_moving,
        +stopped;

Plans fire on belief-addition events. A body item is either an action
(bare atom) or a belief addition (``+atom``). Guards are ``True`` or a
``&``-conjunction of positive belief atoms. Plan bodies run to completion
inside one deliberation cycle.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


class AgentSyntaxError(SyntaxError):
    def __init__(self, msg: str, line: int, col: int) -> None:
        super().__init__(f"{msg} (line {line}, column {col})")
        self.lineno = line
        self.offset = col
        self.reason = msg

    def __str__(self) -> str:
        # SyntaxError would append its own "(line N)" to the message.
        return self.msg


class UnknownHeaderSection(AgentSyntaxError):
    pass


class UndeclaredPercept(ValueError):
    pass


@dataclass(frozen=True)
class Action:
    name: str


@dataclass(frozen=True)
class AddBelief:
    name: str


BodyItem = Union[Action, AddBelief]


@dataclass(frozen=True)
class Plan:
    trigger: str
    guard: tuple[str, ...]  # empty tuple means True
    body: tuple[BodyItem, ...]

    def __post_init__(self) -> None:
        if not self.body:
            raise ValueError("plan body must be non-empty")

    def applicable(self, beliefs: frozenset[str] | set[str]) -> bool:
        return all(g in beliefs for g in self.guard)


@dataclass(frozen=True)
class AgentProgram:
    name: str
    percept_atoms: frozenset[str]
    plans: tuple[Plan, ...] = ()

    def asserted_atoms(self) -> frozenset[str]:
        return frozenset(i.name for p in self.plans for i in p.body if isinstance(i, AddBelief))

    def atom_universe(self) -> frozenset[str]:
        return self.percept_atoms | self.asserted_atoms()

    def with_percepts(self, atoms: Iterable[str]) -> AgentProgram:
        return AgentProgram(self.name, self.percept_atoms | frozenset(atoms), self.plans)


@dataclass(frozen=True)
class AgentState:
    beliefs: frozenset[str] = frozenset()
    # Beliefs added by the agent itself; never retracted by percept sync.
    asserted: frozenset[str] = frozenset()
    pending: tuple[str, ...] = ()


# -- lexing -----------------------------------------------------------------

_TOKEN_SPEC = [
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+|//[^\n]*"),
    ("SECTION", r":[A-Za-z_]+:"),
    ("ARROW", r"<-"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("PUNCT", r"[+:{},;&]"),
    ("BAD", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKEN_SPEC))


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        col = m.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = m.end()
        elif kind == "SKIP":
            continue
        elif kind == "BAD":
            raise AgentSyntaxError(f"unexpected character {m.group()!r}", line, col)
        else:
            toks.append(_Tok(kind, m.group(), line, col))
    toks.append(_Tok("EOF", "", line, len(text) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _lex(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok: _Tok | None = None) -> AgentSyntaxError:
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return AgentSyntaxError(f"{msg}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.peek().text != text:
            raise self.fail(f"expected {text!r}")
        return self.next()

    def atom(self) -> tuple[str, _Tok]:
        tok = self.peek()
        if tok.kind != "IDENT" or not ATOM_RE.match(tok.text):
            raise self.fail("expected a lowercase atom")
        self.next()
        return tok.text, tok

    def program(self) -> tuple[AgentProgram, dict[str, _Tok]]:
        self.expect("GWENDOLEN")
        name = None
        percepts: list[str] | None = None
        plans: list[Plan] = []
        trigger_toks: dict[str, _Tok] = {}
        seen_plans = False
        while self.peek().kind != "EOF":
            tok = self.next()
            if tok.kind != "SECTION":
                raise self.fail("expected a section header", tok)
            if tok.text == ":name:":
                ident = self.next()
                if ident.kind != "IDENT":
                    raise self.fail("expected agent name", ident)
                name = ident.text
            elif tok.text == ":percepts:":
                percepts = [self.atom()[0]]
                while self.peek().text == ",":
                    self.next()
                    percepts.append(self.atom()[0])
            elif tok.text == ":Plans:":
                seen_plans = True
                while self.peek().text == "+":
                    plan, trig_tok = self.plan()
                    plans.append(plan)
                    trigger_toks.setdefault(plan.trigger, trig_tok)
            else:
                raise UnknownHeaderSection(f"unknown header section {tok.text}", tok.line, tok.col)
        if name is None:
            raise self.fail("missing :name: section")
        if not seen_plans:
            raise self.fail("missing :Plans: section")
        added = {i.name for p in plans for i in p.body if isinstance(i, AddBelief)}
        if percepts is None:
            # Undeclared alphabet: every trigger or guard atom the agent never adds itself.
            mentioned = {p.trigger for p in plans} | {g for p in plans for g in p.guard}
            percept_set = frozenset(mentioned - added)
        else:
            percept_set = frozenset(percepts)
            for trig, ttok in trigger_toks.items():
                if trig not in percept_set and trig not in added:
                    raise AgentSyntaxError(
                        f"trigger {trig!r} is neither a declared percept nor added by any plan",
                        ttok.line,
                        ttok.col,
                    )
        return AgentProgram(name, percept_set, tuple(plans)), trigger_toks

    def plan(self) -> tuple[Plan, _Tok]:
        self.expect("+")
        trigger, trig_tok = self.atom()
        self.expect(":")
        self.expect("{")
        guard: list[str] = []
        if self.peek().text == "True":
            self.next()
        else:
            guard.append(self.atom()[0])
            while self.peek().text == "&":
                self.next()
                guard.append(self.atom()[0])
        self.expect("}")
        self.expect("<-")
        body = [self.body_item()]
        while self.peek().text == ",":
            self.next()
            body.append(self.body_item())
        if self.peek().text != ";":
            raise self.fail("expected ';' to end the plan")
        self.next()
        return Plan(trigger, tuple(guard), tuple(body)), trig_tok

    def body_item(self) -> BodyItem:
        if self.peek().text == "+":
            self.next()
            return AddBelief(self.atom()[0])
        return Action(self.atom()[0])


def parse_agent(text: str) -> AgentProgram:
    return _Parser(text).program()[0]


def load_agent(path: str | Path) -> AgentProgram:
    return parse_agent(Path(path).read_text())


def render_agent(program: AgentProgram, declare_percepts: bool = True) -> str:
    lines = ["GWENDOLEN", f":name: {program.name}"]
    if declare_percepts and program.percept_atoms:
        lines.append(":percepts: " + ", ".join(sorted(program.percept_atoms)))
    lines.append(":Plans:")
    for plan in program.plans:
        guard = " & ".join(plan.guard) if plan.guard else "True"
        items = [f"+{i.name}" if isinstance(i, AddBelief) else i.name for i in plan.body]
        lines.append(f"+{plan.trigger}: {{{guard}}} <-")
        lines.append("    " + ",\n    ".join(items) + ";")
    return "\n".join(lines) + "\n"


# -- interpretation -----------------------------------------------------------


def agent_cycle(
    state: AgentState, program: AgentProgram, percepts: Iterable[str]
) -> tuple[AgentState, list[str]]:
    """One perceive-deliberate-act cycle.

    Percept beliefs are synchronised to ``percepts`` (new ones raise an
    addition event, missing ones are dropped unless the agent asserted
    them). Events are then handled FIFO; each fires the first plan whose
    trigger matches and whose guard holds. Belief additions made by a plan
    queue further events, handled in the same cycle.
    """
    percepts = frozenset(percepts)
    undeclared = percepts - program.percept_atoms
    if undeclared:
        raise UndeclaredPercept(f"percepts not declared by {program.name}: {sorted(undeclared)}")

    beliefs = set(state.beliefs)
    asserted = set(state.asserted)
    queue = deque(state.pending)

    for atom in sorted(percepts - state.beliefs):
        beliefs.add(atom)
        queue.append(atom)
    beliefs -= (state.beliefs - state.asserted) - percepts

    actions: list[str] = []
    while queue:
        event = queue.popleft()
        for plan in program.plans:
            if plan.trigger == event and plan.applicable(beliefs):
                for item in plan.body:
                    if isinstance(item, Action):
                        actions.append(item.name)
                    else:
                        asserted.add(item.name)
                        if item.name not in beliefs:
                            beliefs.add(item.name)
                            queue.append(item.name)
                break
    return AgentState(frozenset(beliefs), frozenset(asserted), ()), actions
