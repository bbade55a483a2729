"""Structured natural-language requirements and their LTL reading.

Supported sentence shape::

    [global] [whenever|when|if <cond>[,]] <component> shall [eventually|always] [satisfy] <response>

Omitted scope means global, an omitted condition is ``true`` and omitted
timing means eventually. ``<cond>`` and ``<response>`` are boolean
expressions over atoms using ``&``, ``|``, ``~`` (also ``and``, ``or``,
``not``) and parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from saferos.ltl import (
    TRUE,
    And,
    Atom,
    BeliefAtom,
    Const,
    Finally,
    Formula,
    Globally,
    Implies,
    LtlSyntaxError,
    Not,
    Or,
    map_leaves,
    parse_ltl,
    print_ltl,
    subformulas,
)

CONDITION_KEYWORDS = ("whenever", "when", "if")
RESERVED = {"shall", "global", "eventually", "always", "satisfy", *CONDITION_KEYWORDS}


class FretishError(ValueError):
    pass


class MissingShall(FretishError):
    pass


class MissingComponent(FretishError):
    pass


class MissingResponse(FretishError):
    pass


class FretishSyntaxError(FretishError):
    pass


class Timing(str, Enum):
    EVENTUALLY = "eventually"
    ALWAYS = "always"


@dataclass(frozen=True)
class Requirement:
    scope: str
    condition: Formula
    component: str
    timing: Timing
    response: Formula


_WORD_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|[&|~!(),]|\S)")
_BOOL_WORDS = {"and": "&", "or": "|", "not": "~"}


def _words(text: str) -> list[str]:
    text = text.strip()
    if text.endswith("."):
        text = text[:-1]
    return [m.group(1) for m in _WORD_RE.finditer(text) if m.group(1)]


def _bexpr(words: list[str], what: str) -> Formula:
    src = " ".join(_BOOL_WORDS.get(w.lower(), w) for w in words)
    try:
        f = parse_ltl(src)
    except LtlSyntaxError as exc:
        raise FretishSyntaxError(f"bad {what} expression {src!r}: {exc}") from None
    for node in subformulas(f):
        if not isinstance(node, (Const, Atom, Not, And, Or, Implies)):
            raise FretishSyntaxError(f"{what} must be a boolean expression over atoms: {src!r}")
    return f


def parse_fretish(text: str) -> Requirement:
    words = _words(text)
    lowered = [w.lower() for w in words]
    if "shall" not in lowered:
        raise MissingShall(f"requirement has no 'shall': {text.strip()!r}")
    k = lowered.index("shall")
    pre, post = words[:k], words[k + 1 :]

    scope = "global"
    if pre and pre[0].lower() == "global":
        pre = pre[1:]

    condition: Formula = TRUE
    if pre and pre[0].lower() in CONDITION_KEYWORDS:
        keyword, cond_words = pre[0], pre[1:-1]
        if cond_words and cond_words[-1] == ",":
            cond_words = cond_words[:-1]
        # With a single word after the keyword it reads as the condition, so the
        # compulsory component is what is missing.
        if not cond_words or pre[-1] == ",":
            raise MissingComponent(f"no component after the '{keyword}' condition: {text.strip()!r}")
        condition = _bexpr(cond_words, "condition")
        pre = pre[-1:]

    if not pre:
        raise MissingComponent(f"no component before 'shall': {text.strip()!r}")
    if len(pre) > 1:
        raise FretishSyntaxError(f"expected a single component name before 'shall', got {' '.join(pre)!r}")
    component = pre[0]
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", component) or component.lower() in RESERVED:
        raise MissingComponent(f"{component!r} is not a component name")

    timing = Timing.EVENTUALLY
    if post and post[0].lower() in ("eventually", "always"):
        timing = Timing(post[0].lower())
        post = post[1:]
    if post and post[0].lower() == "satisfy":
        post = post[1:]
    if not post:
        raise MissingResponse(f"requirement has no response: {text.strip()!r}")
    return Requirement(scope, condition, component, timing, _bexpr(post, "response"))


def render_fretish(req: Requirement) -> str:
    """Surface sentence for a requirement; parse_fretish reads it back unchanged."""
    parts = [req.scope]
    if req.condition != TRUE:
        parts += ["whenever", print_ltl(req.condition)]
    parts += [req.component, "shall", req.timing.value, print_ltl(req.response)]
    return " ".join(parts)


def parse_fret_file(text: str) -> list[Requirement]:
    reqs = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            reqs.append(parse_fretish(line))
    return reqs


def load_requirements(path: str | Path) -> list[Requirement]:
    return parse_fret_file(Path(path).read_text())


def formalize(req: Requirement) -> Formula:
    if req.timing is Timing.EVENTUALLY:
        return Globally(Implies(req.condition, Finally(req.response)))
    return Globally(Implies(req.condition, req.response))


def req_to_belief_property(req: Requirement) -> Formula:
    """Formalize and read every atom as a belief of the requirement's component."""

    def to_belief(leaf: Formula) -> Formula:
        return BeliefAtom(req.component, leaf.name) if isinstance(leaf, Atom) else leaf

    return map_leaves(formalize(req), to_belief)
