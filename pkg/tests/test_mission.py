import json

import pytest

from saferos.audit import audit_intervention_latency
from saferos.interceptor import ForwardWhenStopped
from saferos.mission import ConfigError, MissionRunner, RunConfig, asset, run
from saferos.sim import parse_world
from saferos.sras import Mission, PlannerConfig
from saferos.trace import read_trace

CORRIDOR = dict(world=asset("corridor.world"), mission=asset("corridor.mission"))


def records(runner):
    return [json.loads(line) for line in runner.trace.to_jsonl().splitlines()]


def test_open_world_three_waypoints_done_without_interventions():
    world = parse_world((asset("open.world")).read_text())
    mission = Mission(((2.0, 0.0), (2.0, 2.0), (-1.0, 1.0)))
    runner = MissionRunner(RunConfig(), world=world, mission=mission)
    summary = runner.run()
    assert summary.status == "Done"
    assert summary.waypoints_reached == 3 and summary.interventions == 0


def test_storage_inspection_returns_home():
    summary = run(RunConfig())
    assert summary.status == "Done"
    assert summary.waypoints_reached == 4 and summary.interventions == 0
    assert abs(summary.final_pose.x - 1.0) <= 0.1 and abs(summary.final_pose.y - 1.0) <= 0.1


def test_faults_near_obstacle_trigger_and_freeze():
    runner = MissionRunner(RunConfig(**CORRIDOR, fault_prob=0.3, max_cycles=300, seed=3))
    summary = runner.run()
    assert summary.interventions >= 1
    assert summary.clearance_at_stop is not None and summary.clearance_at_stop < 0.05
    assert audit_intervention_latency(records(runner), final_pose=(summary.final_pose.x, summary.final_pose.y)).passed


def test_without_faults_the_planner_stops_short():
    summary = run(RunConfig(**CORRIDOR, max_cycles=300))
    assert summary.status == "MaxCycles" and summary.interventions == 0
    assert summary.min_clearance >= PlannerConfig().d_stop - 1e-9


@pytest.mark.parametrize("bad", [dict(max_cycles=0), dict(dt=0.0), dict(fault_prob=1.5)])
def test_config_errors(bad):
    with pytest.raises(ConfigError):
        RunConfig(**bad)


def test_cycle_order_in_trace():
    runner = MissionRunner(RunConfig(**CORRIDOR, fault_prob=0.3, max_cycles=300, seed=3))
    runner.run()
    order = {"/scan": 0, "/odom": 1, "/goal": 2, "/cmd_vel": 3, "/gwendolen_control": 4, "/cmd_vel_safe": 5}
    cycle, last = -1, -1
    for r in records(runner):
        if r["kind"] != "publish":
            continue
        rank = order[r["topic"]]
        if r["topic"] == "/scan":
            cycle, last = r["seq"], rank
            continue
        assert rank >= last, r
        last = rank
    assert cycle == runner.cycle - 1


def test_trace_time_is_non_decreasing(tmp_path):
    out = tmp_path / "t.jsonl"
    run(RunConfig(**CORRIDOR, fault_prob=0.3, max_cycles=200, seed=1), out)
    ts = [r["t"] for r in read_trace(out)]
    assert ts == sorted(ts)


def test_pause_checkpoint_reset_resume(tmp_path):
    cfg = RunConfig(**CORRIDOR, fault_prob=0.3, max_cycles=400, seed=3)
    runner = MissionRunner(cfg)
    assert runner.run(pause_at=250) is None
    assert runner.interceptor.impl.stop_requested
    ck = tmp_path / "run.pkl"
    runner.save(ck)
    resumed = MissionRunner.load(ck)
    resumed.request_reset()
    resumed.step_cycle()
    assert not resumed.interceptor.impl.stop_requested
    resets = [r for r in records(resumed) if r.get("topic") == "/gwendolen_control" and r["payload"] == {"value": False}]
    assert len(resets) == 1


def test_paused_then_resumed_equals_straight_run():
    cfg = RunConfig(**CORRIDOR, fault_prob=0.3, max_cycles=200, seed=5)
    a = MissionRunner(cfg)
    a.run()
    b = MissionRunner(cfg)
    b.run(pause_at=77)
    b.run()
    assert a.trace.to_jsonl() == b.trace.to_jsonl()


def test_audit_flags_a_forwarding_interceptor():
    runner = MissionRunner(RunConfig(**CORRIDOR, fault_prob=0.3, max_cycles=300, seed=3))
    runner.interceptor.impl = ForwardWhenStopped()
    summary = runner.run()
    audit = audit_intervention_latency(records(runner), final_pose=(summary.final_pose.x, summary.final_pose.y))
    assert audit.triggers == 1 and not audit.passed
