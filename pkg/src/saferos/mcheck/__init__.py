"""Explicit-state LTL model checking of agent programs."""

from saferos.ltl import LtlSyntaxError, parse_ltl as parse_psl
from saferos.mcheck.buchi import BuchiAutomaton, Guard, UnsupportedOperator, accepts, ltl_to_buchi, nnf
from saferos.mcheck.explore import (
    Counterexample,
    Holds,
    MalformedCounterexample,
    StateSpaceBound,
    Step,
    Verdict,
    VerificationEnv,
    Violated,
    explore,
    format_verdict,
    observation,
    replay,
)
from saferos.mcheck.lasso import evaluate, evaluate_all

__all__ = [
    "BuchiAutomaton",
    "Counterexample",
    "Guard",
    "Holds",
    "LtlSyntaxError",
    "MalformedCounterexample",
    "StateSpaceBound",
    "Step",
    "UnsupportedOperator",
    "Verdict",
    "VerificationEnv",
    "Violated",
    "accepts",
    "evaluate",
    "evaluate_all",
    "explore",
    "format_verdict",
    "ltl_to_buchi",
    "nnf",
    "observation",
    "parse_psl",
    "replay",
]
