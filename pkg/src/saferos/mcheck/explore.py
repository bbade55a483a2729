"""Exhaustive checking of agent programs against belief properties.

The system under test is the agent driven by a nondeterministic
environment that may deliver any subset of its percept alphabet at every
cycle. States are agent states at cycle boundaries; the observation at a
state is the set of propositions ``B(agent, b)`` with ``b`` believed.
The first observation is taken after the first cycle.

``explore`` builds the product of that system with the automaton for the
negated property on the fly and looks for an accepting cycle with a
nested depth-first search. Successors are always generated in a fixed
order, so verdicts and counterexamples are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Union

from saferos.agentlang import AgentProgram, AgentState, agent_cycle
from saferos.ltl import BeliefAtom, Formula, Not, contains_next, propositions
from saferos.mcheck.buchi import UnsupportedOperator, ltl_to_buchi
from saferos.mcheck.lasso import evaluate

DEFAULT_MAX_STATES = 10**6


class StateSpaceBound(RuntimeError):
    pass


class MalformedCounterexample(ValueError):
    pass


@dataclass(frozen=True)
class VerificationEnv:
    alphabet: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        if not self.alphabet:
            raise ValueError("verification alphabet must be non-empty")

    def branches(self) -> list[frozenset[str]]:
        """Every percept subset, smallest first, then lexicographic."""
        atoms = sorted(self.alphabet)
        return [frozenset(c) for k in range(len(atoms) + 1) for c in combinations(atoms, k)]


@dataclass(frozen=True)
class Step:
    percepts: frozenset[str]
    state: AgentState


@dataclass(frozen=True)
class Counterexample:
    """Lasso execution: ``prefix`` then ``cycle``.

    ``cycle[0]`` and ``cycle[-1]`` hold the same state; the infinite run is
    prefix, cycle[0], then cycle[1:] repeated forever.
    """

    prefix: tuple[Step, ...]
    cycle: tuple[Step, ...]

    def stem_and_loop(self) -> tuple[list[Step], list[Step]]:
        return list(self.prefix) + [self.cycle[0]], list(self.cycle[1:])


@dataclass(frozen=True)
class Holds:
    states_explored: int


@dataclass(frozen=True)
class Violated:
    counterexample: Counterexample
    states_explored: int


Verdict = Union[Holds, Violated]


def observation(props: Iterable[Formula], state: AgentState) -> frozenset[Formula]:
    return frozenset(p for p in props if _prop_atom(p) in state.beliefs)


def _prop_atom(p: Formula) -> str:
    return p.atom if isinstance(p, BeliefAtom) else p.name


def _check_property(program: AgentProgram, prop: Formula) -> None:
    if contains_next(prop):
        raise UnsupportedOperator("the next operator is not supported")
    for p in propositions(prop):
        if isinstance(p, BeliefAtom) and p.agent != program.name:
            raise ValueError(f"property refers to agent {p.agent!r}, program is {program.name!r}")


class _System:
    """Agent transition relation with memoised cycles."""

    def __init__(self, program: AgentProgram, env: VerificationEnv, props: Iterable[Formula]) -> None:
        self.program = program.with_percepts(env.alphabet)
        self.branches = env.branches()
        self.props = frozenset(props)
        self._cache: dict[tuple[AgentState, frozenset[str]], AgentState] = {}
        self._obs: dict[AgentState, frozenset[Formula]] = {}

    def step(self, s: AgentState, percepts: frozenset[str]) -> AgentState:
        key = (s, percepts)
        nxt = self._cache.get(key)
        if nxt is None:
            nxt = agent_cycle(s, self.program, percepts)[0]
            self._cache[key] = nxt
        return nxt

    def observe(self, s: AgentState) -> frozenset[Formula]:
        obs = self._obs.get(s)
        if obs is None:
            obs = self._obs[s] = observation(self.props, s)
        return obs


def explore(
    program: AgentProgram,
    env: VerificationEnv,
    prop: Formula,
    max_states: int = DEFAULT_MAX_STATES,
) -> Verdict:
    _check_property(program, prop)
    aut = ltl_to_buchi(Not(prop))
    system = _System(program, env, propositions(prop))

    def successors(node):
        s, q = node
        out = []
        for p in system.branches:
            s2 = system.step(s, p)
            obs = system.observe(s2)
            for q2 in aut.succ[q]:
                if aut.label[q2](obs):
                    out.append((p, (s2, q2)))
        return out

    s0 = AgentState()
    roots = []
    for p in system.branches:
        s1 = system.step(s0, p)
        obs = system.observe(s1)
        roots += [(p, (s1, q)) for q in aut.initial if aut.label[q](obs)]

    outer_seen: set = set()
    inner_seen: set = set()

    def inner(seed) -> list | None:
        """Path of (percepts, node) from seed back to seed, or None."""
        path: list = []
        stack = [iter(successors(seed))]
        while stack:
            for p, m in stack[-1]:
                if m == seed:
                    return path + [(p, m)]
                if m not in inner_seen:
                    inner_seen.add(m)
                    path.append((p, m))
                    stack.append(iter(successors(m)))
                    break
            else:
                stack.pop()
                if path:
                    path.pop()
        return None

    for root in roots:
        if root[1] in outer_seen:
            continue
        outer_seen.add(root[1])
        path = [root]
        stack = [iter(successors(root[1]))]
        while stack:
            for p, m in stack[-1]:
                if m not in outer_seen:
                    outer_seen.add(m)
                    if len(outer_seen) > max_states:
                        raise StateSpaceBound(f"more than {max_states} product states")
                    path.append((p, m))
                    stack.append(iter(successors(m)))
                    break
            else:
                stack.pop()
                node = path[-1][1]
                if node[1] in aut.accepting and inner(node) is not None:
                    # Report the shortest stem to the seed and the shortest cycle through it.
                    stem = _bfs_path(roots, successors, node)
                    loop = _bfs_path(successors(node), successors, node)
                    cex = Counterexample(
                        prefix=tuple(Step(p, n[0]) for p, n in stem[:-1]),
                        cycle=tuple(Step(p, n[0]) for p, n in [stem[-1]] + loop),
                    )
                    return Violated(cex, len(outer_seen))
                path.pop()
    return Holds(len(outer_seen))


def _bfs_path(sources, successors, target) -> list:
    """Shortest list of (percepts, node) edges from one of ``sources`` to ``target``."""
    parent: dict = {}
    queue = deque()
    for p, n in sources:
        if n not in parent:
            parent[n] = (p, None)
            queue.append(n)
    while queue:
        n = queue.popleft()
        if n == target:
            path = []
            while n is not None:
                p, prev = parent[n]
                path.append((p, n))
                n = prev
            return path[::-1]
        for p, m in successors(n):
            if m not in parent:
                parent[m] = (p, n)
                queue.append(m)
    raise AssertionError("target not reachable")


def replay(program: AgentProgram, cex: Counterexample, prop: Formula) -> bool:
    """Re-run the agent along ``cex`` and confirm it really violates ``prop``.

    Returns False if the recorded states do not match a fresh execution or
    if the lasso word satisfies the property.
    """
    if len(cex.cycle) < 2:
        raise MalformedCounterexample("cycle needs at least two steps")
    if cex.cycle[0].state != cex.cycle[-1].state:
        raise MalformedCounterexample("cycle does not return to its first state")
    steps = list(cex.prefix) + list(cex.cycle)
    alphabet = frozenset().union(*(st.percepts for st in steps))
    prog = program.with_percepts(alphabet)
    s = AgentState()
    for st in steps:
        s = agent_cycle(s, prog, st.percepts)[0]
        if s != st.state:
            return False
    props = propositions(prop)
    stem, loop = cex.stem_and_loop()
    return not evaluate(
        prop,
        [observation(props, st.state) for st in stem],
        [observation(props, st.state) for st in loop],
    )


def _fmt_set(items: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(items)) + "}"


def format_verdict(verdict: Verdict) -> str:
    if isinstance(verdict, Holds):
        return f"HOLDS ({verdict.states_explored} states)"
    cex = verdict.counterexample
    lines = [f"VIOLATED ({verdict.states_explored} states)", "prefix:"]
    for i, st in enumerate(cex.prefix):
        lines.append(f"  {i}: percepts={_fmt_set(st.percepts)} beliefs={_fmt_set(st.state.beliefs)}")
    lines.append("cycle:")
    for i, st in enumerate(cex.cycle):
        lines.append(f"  {i}: percepts={_fmt_set(st.percepts)} beliefs={_fmt_set(st.state.beliefs)}")
    return "\n".join(lines)
