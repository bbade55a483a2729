import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus import CHAINED, SAFETY_AGENT, TWO_PERCEPTS
from saferos.agentlang import (
    Action,
    AddBelief,
    AgentProgram,
    AgentState,
    AgentSyntaxError,
    Plan,
    UndeclaredPercept,
    UnknownHeaderSection,
    agent_cycle,
    parse_agent,
    render_agent,
)

SIF = parse_agent(SAFETY_AGENT)


def test_safety_agent_parses():
    assert SIF.name == "agilex_agent"
    assert SIF.plans == (Plan("too_close", (), (Action("stop_moving"), AddBelief("stopped"))),)
    assert SIF.percept_atoms == {"too_close"}


def test_empty_plan_section_is_valid():
    prog = parse_agent("GWENDOLEN\n:name: idle\n:Plans:\n")
    assert prog.plans == ()


def test_missing_semicolon_reports_position():
    with pytest.raises(AgentSyntaxError) as info:
        parse_agent("GWENDOLEN\n:name: a\n:Plans:\n+too_close: {True} <- stop_moving\n")
    assert info.value.lineno == 5


def test_syntax_errors():
    bad = [
        "",
        ":name: a\n:Plans:\n",
        "GWENDOLEN\n:Plans:\n",
        "GWENDOLEN\n:name: a\n",
        "GWENDOLEN\n:name: a\n:Plans:\n+Too: {True} <- x;\n",
        "GWENDOLEN\n:name: a\n:Plans:\n+t: {True} <- ;\n",
        "GWENDOLEN\n:name: a\n:Plans:\n+t: {True} x;\n",
        "GWENDOLEN\n:name: a\n:percepts: p\n:Plans:\n+q: {True} <- x;\n",
    ]
    for text in bad:
        with pytest.raises(AgentSyntaxError):
            parse_agent(text)


def test_unknown_section():
    with pytest.raises(UnknownHeaderSection):
        parse_agent("GWENDOLEN\n:name: a\n:Goals:\n:Plans:\n")


def test_comments_and_declared_percepts():
    prog = parse_agent("GWENDOLEN // safety agent\n:name: a\n:percepts: p, q\n:Plans:\n+p: {q} <- act; // react\n")
    assert prog.percept_atoms == {"p", "q"}
    assert prog.plans[0].guard == ("q",)


def test_fresh_state_too_close_fires_once():
    s, actions = agent_cycle(AgentState(), SIF, {"too_close"})
    assert actions == ["stop_moving"]
    assert s.beliefs == {"too_close", "stopped"}
    s, actions = agent_cycle(s, SIF, {"too_close"})
    assert actions == []


def test_no_percepts_no_action():
    s, actions = agent_cycle(AgentState(), SIF, set())
    assert actions == [] and s.beliefs == frozenset()


def test_undeclared_percept():
    with pytest.raises(UndeclaredPercept):
        agent_cycle(AgentState(), SIF, {"smoke"})


def test_percept_retracted_but_asserted_belief_kept():
    s, _ = agent_cycle(AgentState(), SIF, {"too_close"})
    s, _ = agent_cycle(s, SIF, set())
    assert s.beliefs == {"stopped"}


def test_retrigger_after_clearing():
    s, _ = agent_cycle(AgentState(), SIF, {"too_close"})
    s, _ = agent_cycle(s, SIF, set())
    _, actions = agent_cycle(s, SIF, {"too_close"})
    assert actions == ["stop_moving"]


def test_first_applicable_plan_only():
    prog = parse_agent("GWENDOLEN\n:name: a\n:Plans:\n+p: {True} <- first;\n+p: {True} <- second;\n")
    assert agent_cycle(AgentState(), prog, {"p"})[1] == ["first"]


def test_guard_skips_to_next_plan():
    prog = parse_agent("GWENDOLEN\n:name: a\n:percepts: p, q\n:Plans:\n+p: {q} <- first;\n+p: {True} <- second;\n")
    assert agent_cycle(AgentState(), prog, {"p"})[1] == ["second"]
    assert agent_cycle(AgentState(), prog, {"p", "q"})[1] == ["first"]


def test_added_belief_events_run_in_same_cycle():
    prog = parse_agent(CHAINED)
    s, actions = agent_cycle(AgentState(), prog, {"too_close"})
    assert actions == ["stop_moving"] and s.beliefs == {"too_close", "alarm", "stopped"}
    assert s.pending == ()


def test_render_round_trip_of_fixtures():
    for text in (SAFETY_AGENT, CHAINED, TWO_PERCEPTS):
        prog = parse_agent(text)
        assert parse_agent(render_agent(prog)) == prog
        assert parse_agent(render_agent(prog, declare_percepts=False)) == prog


# -- properties ------------------------------------------------------------------

atoms = st.sampled_from(["p", "q", "r", "s"])
plans = st.builds(
    Plan,
    trigger=atoms,
    guard=st.lists(atoms, max_size=2).map(tuple),
    body=st.lists(st.one_of(st.builds(Action, st.sampled_from(["go", "halt"])), st.builds(AddBelief, atoms)), min_size=1, max_size=3).map(tuple),
)
programs = st.builds(AgentProgram, name=st.just("a"), percept_atoms=st.just(frozenset({"p", "q", "r", "s"})), plans=st.lists(plans, max_size=4).map(tuple))
percept_seqs = st.lists(st.frozensets(st.sampled_from(["p", "q"])), max_size=12)


@given(programs)
def test_render_round_trip(prog):
    assert parse_agent(render_agent(prog)) == prog


@given(programs, percept_seqs)
def test_asserted_beliefs_persist_and_universe_is_finite(prog, seq):
    s = AgentState()
    held: set[str] = set()
    for percepts in seq:
        s, _ = agent_cycle(s, prog, percepts)
        assert held <= s.beliefs
        held |= s.asserted
        assert s.beliefs <= prog.atom_universe()
        assert s.pending == ()


@given(st.lists(st.booleans(), max_size=30))
def test_firings_equal_rising_edges(bits):
    s, fired, rising, prev = AgentState(), 0, 0, False
    for b in bits:
        s, actions = agent_cycle(s, SIF, {"too_close"} if b else set())
        fired += actions.count("stop_moving")
        rising += b and not prev
        prev = b
    assert fired == rising
