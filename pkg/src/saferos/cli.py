"""Command line entry point.

Exit codes: 0 success or property holds, 1 violation or contract failure,
2 collision, 3 configuration or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from saferos.agentlang import AgentSyntaxError, load_agent
from saferos.fretish import FretishError, formalize, load_requirements, req_to_belief_property
from saferos.interceptor import MUTANTS, CmdVelInterceptor, check_contract
from saferos.ltl import LtlSyntaxError, Formula, parse_ltl, print_ltl
from saferos.mcheck import (
    StateSpaceBound,
    UnsupportedOperator,
    VerificationEnv,
    Violated,
    explore,
    format_verdict,
    replay,
)
from saferos.messages import EmptyScan
from saferos.mission import ConfigError, MissionRunner, RunConfig, asset
from saferos.sim import LidarConfig, WorldFormatError
from saferos.sras import MissionFormatError

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_COLLISION = 2
EXIT_CONFIG = 3

_INPUT_ERRORS = (
    ConfigError,
    WorldFormatError,
    MissionFormatError,
    AgentSyntaxError,
    FretishError,
    LtlSyntaxError,
    UnsupportedOperator,
    StateSpaceBound,
    EmptyScan,
    OSError,
    ValueError,
)


def _run_config(args: argparse.Namespace) -> RunConfig:
    kwargs: dict = {
        "world": Path(args.world),
        "mission": Path(args.mission),
        "agent": Path(args.agent),
        "dt": args.dt,
        "max_cycles": args.max_cycles,
        "seed": args.seed,
        "fault_prob": args.faults,
        "threshold": args.threshold,
    }
    if args.beams is not None:
        kwargs["lidar"] = LidarConfig(n_beams=args.beams)
    return RunConfig(**kwargs)


def _finish(runner: MissionRunner, args: argparse.Namespace) -> int:
    summary = runner.run(pause_at=args.pause_at)
    if args.out:
        runner.trace.write(args.out)
    if summary is None:
        if not args.checkpoint:
            raise ConfigError("--pause-at needs --checkpoint")
        runner.save(args.checkpoint)
        print(json.dumps({"status": "Paused", "cycles": runner.cycle, "checkpoint": str(args.checkpoint)}))
        return EXIT_OK
    print(json.dumps(summary.to_dict(), sort_keys=True))
    return EXIT_COLLISION if summary.status == "Collision" else EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    return _finish(MissionRunner(_run_config(args)), args)


def cmd_reset(args: argparse.Namespace) -> int:
    runner = MissionRunner.load(args.resume)
    if runner.finished:
        raise ConfigError(f"run in {args.resume} already finished: {runner.status}")
    runner.request_reset()
    return _finish(runner, args)


def _property(args: argparse.Namespace) -> Formula:
    if args.prop and args.req:
        raise ConfigError("give either --prop or --req, not both")
    if args.prop:
        return parse_ltl(args.prop)
    reqs = load_requirements(args.req or asset("r1.fret"))
    if len(reqs) != 1:
        raise ConfigError(f"expected one requirement, found {len(reqs)}")
    return req_to_belief_property(reqs[0])


def cmd_verify(args: argparse.Namespace) -> int:
    program = load_agent(args.agent)
    prop = _property(args)
    if args.alphabet is not None:
        alphabet = frozenset(a.strip() for a in args.alphabet.split(",") if a.strip())
    else:
        alphabet = program.percept_atoms
    verdict = explore(program, VerificationEnv(alphabet), prop, max_states=args.max_states)
    print(format_verdict(verdict))
    if isinstance(verdict, Violated):
        certified = replay(program, verdict.counterexample, prop)
        print(f"replay: {'confirmed' if certified else 'NOT confirmed'}")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_formalize(args: argparse.Namespace) -> int:
    for req in load_requirements(args.req or asset("r1.fret")):
        f = req_to_belief_property(req) if args.beliefs else formalize(req)
        print(print_ltl(f))
    return EXIT_OK


def cmd_check_interceptor(args: argparse.Namespace) -> int:
    impls = {cls.__name__: cls for cls in (CmdVelInterceptor, *MUTANTS)}
    report = check_contract(n_random=args.n_random, seed=args.seed, impl=impls[args.impl])
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON-lines trace here")
    p.add_argument("--pause-at", type=int, help="stop after this many cycles and checkpoint")
    p.add_argument("--checkpoint", help="where to save a paused run")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="saferos", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a closed-loop mission")
    p.add_argument("--world", default=str(asset("storage.world")))
    p.add_argument("--mission", default=str(asset("inspection.mission")))
    p.add_argument("--agent", default=str(asset("agilex_agent.gwen")))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--faults", type=float, default=0.0, help="per-cycle planner fault probability")
    p.add_argument("--max-cycles", type=int, default=4000)
    p.add_argument("--threshold", type=float, help="override the too_close distance")
    p.add_argument("--beams", type=int, help="number of lidar beams")
    _add_run_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reset", help="publish an operator reset into a paused run and resume it")
    p.add_argument("resume", help="checkpoint written by run --pause-at")
    _add_run_flags(p)
    p.set_defaults(func=cmd_reset)

    p = sub.add_parser("verify", help="model check an agent against a belief property")
    p.add_argument("--agent", default=str(asset("agilex_agent.gwen")))
    p.add_argument("--req", help="requirement file (default: the bundled too_close requirement)")
    p.add_argument("--prop", help="LTL property over B(agent,atom) atoms")
    p.add_argument("--alphabet", help="comma-separated percepts (default: the program's percepts)")
    p.add_argument("--max-states", type=int, default=10**6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("formalize", help="print the LTL of each requirement")
    p.add_argument("--req", help="requirement file (default: the bundled too_close requirement)")
    p.add_argument("--beliefs", action="store_true", help="print the belief property instead")
    p.set_defaults(func=cmd_formalize)

    p = sub.add_parser("check-interceptor", help="run the interceptor contract harness")
    p.add_argument("--n-random", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--impl",
        default="CmdVelInterceptor",
        choices=["CmdVelInterceptor", *(m.__name__ for m in MUTANTS)],
    )
    p.set_defaults(func=cmd_check_interceptor)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
