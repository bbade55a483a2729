"""Closed-loop mission runs.

Every cycle runs in the same fixed order:

1. simulator publishes ``/scan`` and ``/odom``
2. navigation controller publishes ``/cmd_vel``
3. safety function may publish ``/gwendolen_control``
4. interceptor consumes ``/gwendolen_control`` then ``/cmd_vel`` and
   publishes ``/cmd_vel_safe``
5. simulator steps the robot on ``/cmd_vel_safe``

A run ends when the mission is done, on collision, or after
``max_cycles``. Operator resets are queued and published as
``Flag(False)`` at the start of the next cycle.
"""

from __future__ import annotations

import pickle
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from saferos.agentlang import AgentProgram, load_agent
from saferos.interceptor import InterceptorNode
from saferos.messages import ZERO_TWIST, Flag, Goal, RobotState
from saferos.msgbus import MessageBus, latest
from saferos.sim import LidarConfig, World, load_world, min_clearance, raycast, step
from saferos.sras import Mission, MissionState, PlannerConfig, Status, load_mission, plan_step
from saferos.ssbridge import SafetyEnvConfig, SafetyNode
from saferos.trace import Trace


class ConfigError(ValueError):
    pass


def asset(name: str) -> Path:
    """Path of a bundled world, mission, agent or requirement file."""
    return Path(str(resources.files("saferos") / "assets" / name))


@dataclass(frozen=True)
class RunConfig:
    world: Path = field(default_factory=lambda: asset("storage.world"))
    mission: Path = field(default_factory=lambda: asset("inspection.mission"))
    agent: Path = field(default_factory=lambda: asset("agilex_agent.gwen"))
    dt: float = 0.05
    max_cycles: int = 4000
    seed: int = 0
    fault_prob: float = 0.0
    lidar: LidarConfig = LidarConfig()
    threshold: float | None = None
    body_radius: float = 0.0
    planner: PlannerConfig = PlannerConfig()

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ConfigError("dt must be > 0")
        if not self.max_cycles > 0:
            raise ConfigError("max_cycles must be > 0")
        if not 0.0 <= self.fault_prob <= 1.0:
            raise ConfigError("fault_prob must be in [0, 1]")


@dataclass
class RunSummary:
    status: str
    cycles: int
    waypoints_reached: int
    interventions: int
    min_clearance: float
    clearance_at_stop: float | None
    final_pose: RobotState

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "cycles": self.cycles,
            "waypoints_reached": self.waypoints_reached,
            "interventions": self.interventions,
            "min_clearance": self.min_clearance,
            "clearance_at_stop": self.clearance_at_stop,
            "final_pose": [self.final_pose.x, self.final_pose.y, self.final_pose.theta],
        }


class MissionRunner:
    def __init__(
        self,
        cfg: RunConfig,
        world: World | None = None,
        mission: Mission | None = None,
        program: AgentProgram | None = None,
    ) -> None:
        self.cfg = cfg
        world = world or load_world(cfg.world)
        self.world = replace(world, body_radius=cfg.body_radius)
        mission = mission or load_mission(cfg.mission)
        if mission.loop_home and mission.home is None:
            mission = replace(mission, home=(world.start.x, world.start.y))
        self.mission = mission
        self.program = program or load_agent(cfg.agent)
        self.planner = replace(cfg.planner, fault_prob=cfg.fault_prob, seed=cfg.seed)
        self.safety_cfg = SafetyEnvConfig() if cfg.threshold is None else SafetyEnvConfig(threshold=cfg.threshold)

        planner_seed, lidar_seed = np.random.SeedSequence(cfg.seed).spawn(2)
        self.planner_rng = np.random.default_rng(planner_seed)
        self.lidar_rng = np.random.default_rng(lidar_seed)

        self.trace = Trace()
        self.bus = MessageBus(trace=self.trace)
        self._odom = self.bus.subscribe("/odom")
        self._scan = self.bus.subscribe("/scan")
        self._safe_cmd = self.bus.subscribe("/cmd_vel_safe")
        self.safety = SafetyNode(self.program, self.bus, self.safety_cfg)
        self.interceptor = InterceptorNode(self.bus, control_topic=self.safety_cfg.control_topic)

        self.pose = self.world.start
        self.mission_state = MissionState()
        self.cycle = 0
        self.status: str | None = None
        self.waypoints_reached = 0
        self.interventions = 0
        self.min_clearance = min_clearance(self.world, self.pose, cfg.lidar.range_max)
        self.clearance_at_stop: float | None = None
        self._reset_requested = False
        self._last_goal: tuple[float, float] | None = None

    @property
    def finished(self) -> bool:
        return self.status is not None

    def request_reset(self) -> None:
        self._reset_requested = True

    def step_cycle(self) -> None:
        if self.finished:
            raise RuntimeError(f"run already finished: {self.status}")
        cfg, bus = self.cfg, self.bus
        bus.now = self.cycle * cfg.dt
        if self._reset_requested:
            bus.publish(self.safety_cfg.control_topic, Flag(False))
            self._reset_requested = False

        bus.publish("/scan", raycast(self.world, self.pose, cfg.lidar, self.lidar_rng))
        bus.publish("/odom", self.pose)

        pose = latest(self._odom).payload
        scan = latest(self._scan).payload
        before = self.mission_state
        twist, self.mission_state = plan_step(pose, scan, self.mission, before, self.planner, self.planner_rng)
        self.waypoints_reached += _legs_completed(before, self.mission_state, self.mission)
        if self.mission_state.status is Status.EN_ROUTE:
            goal = self.mission_state.target(self.mission)
            if goal != self._last_goal:
                bus.publish("/goal", Goal(*goal))
                self._last_goal = goal
        bus.publish("/cmd_vel", twist)

        n_before = len(self.trace)
        self.safety.tick()
        fired = sum(1 for e in self.trace.events[n_before:] if e.kind == "intervention")
        if fired:
            self.interventions += fired
            if self.clearance_at_stop is None:
                self.clearance_at_stop = min_clearance(self.world, self.pose, cfg.lidar.range_max)

        self.interceptor.spin_once()

        msg = latest(self._safe_cmd)
        cmd = msg.payload if msg is not None else ZERO_TWIST
        self.pose, collided = step(self.world, self.pose, cmd, cfg.dt)
        self.min_clearance = min(self.min_clearance, min_clearance(self.world, self.pose, cfg.lidar.range_max))
        self.cycle += 1
        bus.now = self.cycle * cfg.dt

        if collided:
            bus.record("collision", {"x": self.pose.x, "y": self.pose.y, "theta": self.pose.theta})
            self.status = "Collision"
        elif self.mission_state.status is Status.DONE:
            self.status = "Done"
        elif self.cycle >= cfg.max_cycles:
            self.status = "MaxCycles"

    def run(self, pause_at: int | None = None) -> RunSummary | None:
        """Run to completion, or until ``pause_at`` cycles have elapsed (returns None then)."""
        while not self.finished:
            if pause_at is not None and self.cycle >= pause_at:
                return None
            self.step_cycle()
        return self.summary()

    def summary(self) -> RunSummary:
        return RunSummary(
            status=self.status or "Paused",
            cycles=self.cycle,
            waypoints_reached=self.waypoints_reached,
            interventions=self.interventions,
            min_clearance=self.min_clearance,
            clearance_at_stop=self.clearance_at_stop,
            final_pose=self.pose,
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(pickle.dumps(self))

    @staticmethod
    def load(path: str | Path) -> MissionRunner:
        runner = pickle.loads(Path(path).read_bytes())
        if not isinstance(runner, MissionRunner):
            raise ConfigError(f"{path} is not a paused run")
        return runner


def _legs_completed(before: MissionState, after: MissionState, mission: Mission) -> int:
    def progress(ms: MissionState) -> int:
        n = len(mission.waypoints)
        if ms.status is Status.DONE:
            return n + (1 if mission.loop_home else 0)
        return n if ms.homing else ms.current_index

    return progress(after) - progress(before)


def run(cfg: RunConfig, out: str | Path | None = None) -> RunSummary:
    runner = MissionRunner(cfg)
    summary = runner.run()
    if out is not None:
        runner.trace.write(out)
    return summary
