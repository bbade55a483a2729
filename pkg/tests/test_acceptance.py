"""Acceptance gate: one test per criterion, each at its stated tolerance.

A summary line per criterion is printed at the end of the pytest run.
"""

import json
import math
import time

from corpus import ALPHABETS, CORPUS, FORMULAS, SAFETY_AGENT, MUTANTS, STOP_PROPERTY
from geometry_cases import CASES
from oracles import (
    StateGraph,
    belief_lassos,
    march_ray,
    product_size,
    props_of,
    violated_by_percept_lassos,
    violated_by_state_lassos,
)
from saferos.agentlang import parse_agent
from saferos.audit import audit_intervention_latency
from saferos.cli import main
from saferos.fretish import formalize, parse_fretish, req_to_belief_property
from saferos.interceptor import MUTANTS as INTERCEPTOR_MUTANTS
from saferos.interceptor import check_contract
from saferos.ltl import Atom, BeliefAtom, Finally, Globally, Implies, Not, print_ltl
from saferos.mcheck import Holds, VerificationEnv, Violated, explore, ltl_to_buchi, parse_psl, replay
from saferos.messages import RobotState, Twist
from saferos.mission import MissionRunner, RunConfig, asset
from saferos.sim import integrate, raycast
from saferos.sras import PlannerConfig

R1 = "whenever too_close agilex_agent shall eventually stopped"
# Product states for the safety agent against the stop property, alphabet {too_close};
# pinned after the first verified run and cross-checked by an independent BFS.
SAFETY_AGENT_STATES = 3


def test_criterion_1_formalization_fidelity(criterion):
    """formalize and belief property match the requirement's LTL exactly, < 1 s"""
    start = time.perf_counter()
    req = parse_fretish(R1)
    tc, st = Atom("too_close"), Atom("stopped")
    assert formalize(req) == Globally(Implies(tc, Finally(st)))
    expected_belief = Globally(
        Implies(BeliefAtom("agilex_agent", "too_close"), Finally(BeliefAtom("agilex_agent", "stopped")))
    )
    assert req_to_belief_property(req) == expected_belief == parse_psl(STOP_PROPERTY)
    assert print_ltl(formalize(req)) == "[] ((too_close) -> (<> (stopped)))"
    elapsed = time.perf_counter() - start
    criterion.detail = f"{elapsed:.3f} s"
    assert elapsed < 1.0


def test_criterion_2_sif_verification(criterion):
    """bundled safety agent holds; three mutants violated with replayed counterexamples, < 5 s"""
    start = time.perf_counter()
    prop = parse_psl(STOP_PROPERTY)
    env = VerificationEnv({"too_close"})
    sif = parse_agent(SAFETY_AGENT)
    verdict = explore(sif, env, prop)
    assert isinstance(verdict, Holds)
    bfs = product_size(StateGraph(sif, env.alphabet), ltl_to_buchi(Not(prop)), props_of(prop))
    assert verdict.states_explored == bfs == SAFETY_AGENT_STATES
    for name, text in MUTANTS.items():
        prog = parse_agent(text)
        mv = explore(prog, env, prop)
        assert isinstance(mv, Violated), name
        assert replay(prog, mv.counterexample, prop), name
    elapsed = time.perf_counter() - start
    criterion.detail = f"HOLDS ({verdict.states_explored} states), {len(MUTANTS)}/3 mutants violated, {elapsed:.2f} s"
    assert elapsed < 5.0


def test_criterion_3_checker_soundness(criterion):
    """explore agrees with bounded lasso brute force on every program, alphabet and formula, < 60 s"""
    start = time.perf_counter()
    checked = disagreements = 0
    max_states = 0
    for name, text in CORPUS.items():
        prog = parse_agent(text)
        for alphabet in ALPHABETS:
            graph = StateGraph(prog, alphabet)
            max_states = max(max_states, len(graph.succ))
            percept_lassos = belief_lassos(prog, alphabet) if len(alphabet) == 1 else None
            for f in FORMULAS:
                verdict = explore(prog, VerificationEnv(alphabet), f)
                violated = isinstance(verdict, Violated)
                oracle = violated_by_state_lassos(graph, f)
                if percept_lassos is not None:
                    # Two independent oracles must agree before either is trusted.
                    assert violated_by_percept_lassos(percept_lassos, f) == oracle, (name, f)
                if violated:
                    cex = verdict.counterexample
                    assert replay(prog, cex, f)
                    assert len(cex.prefix) + 1 <= 6 and len(cex.cycle) - 1 <= 6
                checked += 1
                disagreements += violated != oracle
    elapsed = time.perf_counter() - start
    criterion.detail = (
        f"{checked - disagreements}/{checked} agree, largest state graph {max_states}, {elapsed:.1f} s"
    )
    assert disagreements == 0
    assert elapsed < 60.0


def test_criterion_4_interceptor_contract(criterion):
    """128 grid cases and 10,000 random interleavings pass; each mutant fails, < 5 s"""
    start = time.perf_counter()
    report = check_contract(n_random=10_000, seed=0)
    assert report.grid_cases == 128 and report.random_sequences == 10_000
    assert report.violations == 0, report.summary()
    caught = 0
    for mutant in INTERCEPTOR_MUTANTS:
        mr = check_contract(n_random=10_000, seed=0, impl=mutant)
        caught += (not mr.passed) and mr.counterexample is not None
    elapsed = time.perf_counter() - start
    criterion.detail = f"0 violations, {caught}/{len(INTERCEPTOR_MUTANTS)} mutants caught, {elapsed:.2f} s"
    assert caught == len(INTERCEPTOR_MUTANTS) == 3
    assert elapsed < 5.0


def test_criterion_5_end_to_end_latency(criterion):
    """50 seeded faulty corridor runs freeze within one cycle of a sub-threshold scan, < 30 s"""
    planner = PlannerConfig(v_max=0.5)
    dt = 0.05
    bound = planner.v_max * dt
    start = time.perf_counter()
    passed = triggered = 0
    worst = 0.0
    for seed in range(50):
        cfg = RunConfig(
            world=asset("corridor.world"),
            mission=asset("corridor.mission"),
            fault_prob=0.3,
            dt=dt,
            planner=planner,
            max_cycles=400,
            seed=seed,
        )
        runner = MissionRunner(cfg)
        summary = runner.run()
        records = [json.loads(line) for line in runner.trace.to_jsonl().splitlines()]
        audit = audit_intervention_latency(
            records,
            threshold=runner.safety_cfg.threshold,
            max_displacement=bound,
            final_pose=(summary.final_pose.x, summary.final_pose.y),
        )
        passed += audit.passed and summary.status != "Collision"
        triggered += audit.triggers > 0
        worst = max(worst, audit.max_displacement)
    elapsed = time.perf_counter() - start
    criterion.detail = (
        f"{passed}/50 traces pass, {triggered}/50 triggered, worst displacement {worst:.4f} m "
        f"(bound {bound:.3f}), {elapsed:.1f} s"
    )
    assert passed == 50
    assert triggered == 50
    assert elapsed < 30.0


def test_criterion_6_determinism(criterion, tmp_path, capsys):
    """identical RunConfig gives byte-identical traces; verify text is identical"""
    cfg = RunConfig(world=asset("corridor.world"), mission=asset("corridor.mission"), fault_prob=0.3, max_cycles=300, seed=11)
    paths = []
    for k in range(2):
        runner = MissionRunner(cfg)
        runner.run()
        path = tmp_path / f"trace{k}.jsonl"
        runner.trace.write(path)
        paths.append(path)
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    outputs = []
    for _ in range(2):
        main(["verify", "--prop", "<> B(agilex_agent,stopped)"])
        main(["verify"])
        outputs.append(capsys.readouterr().out)
    criterion.detail = f"trace {len(a)} bytes identical, verdict text identical"
    assert outputs[0] == outputs[1] and "VIOLATED" in outputs[0] and "HOLDS" in outputs[0]


def test_criterion_7_simulator_geometry(criterion):
    """raycast within 1e-9 m of ray marching on 20 scenes; arc kinematics within 1e-12"""
    worst = 0.0
    beams = 0
    for world, pose, cfg in CASES:
        scan = raycast(world, pose, cfg)
        for i, r in enumerate(scan.ranges):
            ref = march_ray(world, pose.x, pose.y, pose.theta + scan.beam_angle(i), cfg.range_max)
            worst = max(worst, abs(r - ref))
            beams += 1
    examples = [
        (Twist(1.0, 0, 0), 0.1, (0.1, 0.0, 0.0)),
        (Twist(math.pi / 2, 0, math.pi / 2), 1.0, (1.0, 1.0, math.pi / 2)),
        (Twist(0.0, 0, math.pi), 1.0, (0.0, 0.0, math.pi)),
    ]
    kin = 0.0
    for cmd, dt, (x, y, th) in examples:
        s = integrate(RobotState(0.0, 0.0, 0.0), cmd, dt)
        kin = max(kin, abs(s.x - x), abs(s.y - y), abs(s.theta - th))
    criterion.detail = f"{len(CASES)} scenes, {beams} beams, max raycast error {worst:.1e} m, max kinematics error {kin:.1e}"
    assert len(CASES) == 20
    assert worst <= 1e-9
    assert kin <= 1e-12
