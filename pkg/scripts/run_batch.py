"""Seeded batch of faulty corridor runs, each audited for stop latency.

    python3 scripts/run_batch.py --runs 50 --faults 0.3
"""

import argparse
import json
import sys
import time

from saferos.audit import audit_intervention_latency
from saferos.mission import MissionRunner, RunConfig, asset


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--first-seed", type=int, default=0)
    p.add_argument("--faults", type=float, default=0.3)
    p.add_argument("--max-cycles", type=int, default=400)
    p.add_argument("--world", default=str(asset("corridor.world")))
    p.add_argument("--mission", default=str(asset("corridor.mission")))
    args = p.parse_args(argv)

    start = time.perf_counter()
    failures = 0
    for seed in range(args.first_seed, args.first_seed + args.runs):
        cfg = RunConfig(
            world=args.world,
            mission=args.mission,
            fault_prob=args.faults,
            max_cycles=args.max_cycles,
            seed=seed,
        )
        runner = MissionRunner(cfg)
        summary = runner.run()
        records = [json.loads(line) for line in runner.trace.to_jsonl().splitlines()]
        audit = audit_intervention_latency(
            records,
            threshold=runner.safety_cfg.threshold,
            max_displacement=cfg.planner.v_max * cfg.dt,
            final_pose=(summary.final_pose.x, summary.final_pose.y),
        )
        ok = audit.passed and summary.status != "Collision"
        failures += not ok
        print(
            f"seed {seed:3d}  {summary.status:9s}  cycles {summary.cycles:4d}  "
            f"triggers {audit.triggers}  max displacement {audit.max_displacement:.4f}  "
            f"{'ok' if ok else 'FAIL ' + '; '.join(audit.violations)}"
        )
    print(f"{args.runs - failures}/{args.runs} runs pass in {time.perf_counter() - start:.1f} s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
