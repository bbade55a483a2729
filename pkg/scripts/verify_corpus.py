"""Model check the bundled agent and its mutants against the too_close property.

    python3 scripts/verify_corpus.py
"""

import sys
import time

from saferos.agentlang import load_agent, parse_agent
from saferos.fretish import load_requirements, req_to_belief_property
from saferos.mcheck import VerificationEnv, Violated, explore, format_verdict, replay
from saferos.mission import asset

MUTANTS = {
    "no plan": """GWENDOLEN
:name: agilex_agent
:percepts: too_close
:Plans:
""",
    "no stopped belief": """GWENDOLEN
:name: agilex_agent
:Plans:
+too_close: {True} <- stop_moving;
""",
    "unsatisfied guard": """GWENDOLEN
:name: agilex_agent
:Plans:
+too_close: {armed} <- stop_moving, +stopped;
""",
}


def main() -> int:
    prop = req_to_belief_property(load_requirements(asset("r1.fret"))[0])
    env = VerificationEnv({"too_close"})
    programs = {"agilex_agent": load_agent(asset("agilex_agent.gwen"))}
    programs |= {name: parse_agent(text) for name, text in MUTANTS.items()}
    bad = 0
    for name, program in programs.items():
        start = time.perf_counter()
        verdict = explore(program, env, prop)
        elapsed = time.perf_counter() - start
        print(f"== {name} ({elapsed * 1e3:.1f} ms)")
        print(format_verdict(verdict))
        if isinstance(verdict, Violated):
            confirmed = replay(program, verdict.counterexample, prop)
            print(f"replay: {'confirmed' if confirmed else 'NOT confirmed'}")
            bad += not confirmed
        # Only the bundled agent should satisfy the property.
        bad += isinstance(verdict, Violated) == (name == "agilex_agent")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
