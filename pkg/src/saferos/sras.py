"""Unverified waypoint-following controller with optional fault injection.

Stands in for the navigation stack: a proportional heading controller whose
forward speed is scaled by free space in a front sector of the scan. With
probability ``fault_prob`` per cycle the clearance scaling is ignored,
which produces the occasional unsafe motion the safety system must catch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from saferos.messages import ZERO_TWIST, EmptyScan, RobotState, Scan, Twist, wrap_angle

FRONT_SECTOR = math.radians(30.0)


class MissionFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Mission:
    waypoints: tuple[tuple[float, float], ...]
    tolerance: float = 0.1
    loop_home: bool = False
    # Where to return after the last waypoint; defaults to waypoints[0].
    home: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not self.waypoints:
            raise MissionFormatError("mission needs at least one waypoint")
        if not self.tolerance > 0:
            raise MissionFormatError("tolerance must be > 0")


@dataclass(frozen=True)
class PlannerConfig:
    v_max: float = 0.5
    w_max: float = 1.5
    k_ang: float = 1.5
    d_stop: float = 0.15
    d_slow: float = 0.5
    fault_prob: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.d_stop < self.d_slow:
            raise ValueError("need 0 < d_stop < d_slow")
        if not (self.v_max > 0 and self.w_max > 0):
            raise ValueError("v_max and w_max must be > 0")
        if not 0.0 <= self.fault_prob <= 1.0:
            raise ValueError("fault_prob must be in [0, 1]")


class Status(str, Enum):
    EN_ROUTE = "EnRoute"
    DONE = "Done"


@dataclass(frozen=True)
class MissionState:
    current_index: int = 0
    status: Status = Status.EN_ROUTE
    homing: bool = False

    def target(self, mission: Mission) -> tuple[float, float]:
        if self.homing:
            return mission.home if mission.home is not None else mission.waypoints[0]
        return mission.waypoints[self.current_index]


def parse_mission(text: str) -> Mission:
    waypoints: list[tuple[float, float]] = []
    kwargs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *rest = line.split()
        try:
            if kind == "waypoint" and len(rest) == 2:
                waypoints.append((float(rest[0]), float(rest[1])))
            elif kind == "tolerance" and len(rest) == 1:
                kwargs["tolerance"] = float(rest[0])
            elif kind == "loop_home" and rest in (["true"], ["false"]):
                kwargs["loop_home"] = rest[0] == "true"
            else:
                raise MissionFormatError(f"line {lineno}: cannot parse {line!r}")
        except ValueError as exc:
            if isinstance(exc, MissionFormatError):
                raise
            raise MissionFormatError(f"line {lineno}: bad number in {line!r}") from None
    return Mission(tuple(waypoints), **kwargs)


def load_mission(path: str | Path) -> Mission:
    return parse_mission(Path(path).read_text())


def front_distance(scan: Scan, half_width: float = FRONT_SECTOR) -> float:
    """Smallest range among beams within +-half_width of the heading."""
    if not scan.ranges:
        raise EmptyScan("scan has no ranges")
    ranges = np.asarray(scan.ranges)
    angles = scan.angle_min + scan.angle_increment * np.arange(len(ranges))
    rel = np.arctan2(np.sin(angles), np.cos(angles))
    sector = ranges[np.abs(rel) <= half_width + 1e-12]
    return float(sector.min()) if sector.size else scan.range_max


def _advance(mission: Mission, ms: MissionState) -> MissionState:
    if ms.homing:
        return replace(ms, status=Status.DONE)
    if ms.current_index + 1 < len(mission.waypoints):
        return replace(ms, current_index=ms.current_index + 1)
    if mission.loop_home:
        return MissionState(0, Status.EN_ROUTE, homing=True)
    return replace(ms, status=Status.DONE)


def plan_step(
    pose: RobotState,
    scan: Scan,
    mission: Mission,
    ms: MissionState,
    cfg: PlannerConfig,
    rng: np.random.Generator,
) -> tuple[Twist, MissionState]:
    if not scan.ranges:
        raise EmptyScan("scan has no ranges")
    # One draw per call keeps the random stream aligned across configs.
    faulty = rng.random() < cfg.fault_prob

    while ms.status is Status.EN_ROUTE:
        wx, wy = ms.target(mission)
        if math.hypot(wx - pose.x, wy - pose.y) > mission.tolerance:
            break
        ms = _advance(mission, ms)
    if ms.status is Status.DONE:
        return ZERO_TWIST, ms

    wx, wy = ms.target(mission)
    e = wrap_angle(math.atan2(wy - pose.y, wx - pose.x) - pose.theta)
    w = min(max(cfg.k_ang * e, -cfg.w_max), cfg.w_max)
    clearance = min(max((front_distance(scan) - cfg.d_stop) / (cfg.d_slow - cfg.d_stop), 0.0), 1.0)
    if faulty:
        clearance = 1.0
    v = cfg.v_max * max(0.0, math.cos(e)) * clearance
    return Twist(v, 0.0, w), ms
