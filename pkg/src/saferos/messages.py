"""Payload types carried on the bus."""

from __future__ import annotations

import math
from dataclasses import dataclass


class EmptyScan(ValueError):
    """A scan with no ranges: treated as a sensor fault, never as free space."""


@dataclass(frozen=True)
class Twist:
    linear_x: float = 0.0
    linear_y: float = 0.0
    angular_z: float = 0.0

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.linear_x, self.linear_y, self.angular_z)):
            raise ValueError(f"non-finite twist {self}")

    def is_zero(self) -> bool:
        return self == ZERO_TWIST


ZERO_TWIST = Twist(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Flag:
    value: bool


@dataclass(frozen=True)
class Goal:
    x: float
    y: float


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.remainder(a, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    return w


@dataclass(frozen=True)
class RobotState:
    x: float
    y: float
    theta: float
    t: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", wrap_angle(self.theta))


# The simulator publishes ground truth pose on /odom.
Pose = RobotState


@dataclass(frozen=True)
class Scan:
    ranges: tuple[float, ...]
    angle_min: float
    angle_increment: float
    range_max: float

    def beam_angle(self, i: int) -> float:
        """Beam direction relative to the robot heading."""
        return self.angle_min + i * self.angle_increment
