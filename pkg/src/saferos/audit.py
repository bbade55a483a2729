"""Post-hoc checks over recorded traces.

These read the JSON-lines records only, never live objects, so they can
audit traces produced elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class LatencyAudit:
    triggers: int = 0
    checked_commands: int = 0
    max_displacement: float = 0.0
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _is_zero(twist: dict) -> bool:
    return twist["linear_x"] == 0.0 and twist["linear_y"] == 0.0 and twist["angular_z"] == 0.0


def audit_intervention_latency(
    records: list[dict],
    threshold: float = 0.05,
    max_displacement: float = 0.025,
    control_topic: str = "/gwendolen_control",
    final_pose: tuple[float, float] | None = None,
) -> LatencyAudit:
    """Check that a sub-threshold scan freezes the robot.

    Cycles are numbered by the ``/scan`` sequence number. Once a scan at
    cycle t reads below ``threshold``, every ``/cmd_vel_safe`` at cycle
    t+1 or later must be the zero twist and the robot may not move more
    than ``max_displacement`` from where it stood at t, until an operator
    reset (``false`` on the control topic). After a reset the check re-arms
    once the scan has cleared, matching the agent's edge-triggered stop.
    """
    audit = LatencyAudit()
    cycle = -1
    trigger: int | None = None
    anchor: tuple[float, float] | None = None
    armed = True

    def check_pose(x: float, y: float, where: str) -> None:
        d = math.hypot(x - anchor[0], y - anchor[1])
        audit.max_displacement = max(audit.max_displacement, d)
        if d > max_displacement + 1e-9:
            audit.violations.append(f"{where}: moved {d:.6f} m after trigger at cycle {trigger}")

    for r in records:
        kind, topic, payload = r["kind"], r.get("topic"), r.get("payload")
        if kind == "collision" and trigger is not None and anchor is not None:
            check_pose(payload["x"], payload["y"], f"collision after cycle {cycle}")
        if kind != "publish":
            continue
        if topic == "/scan":
            cycle = r["seq"]
            close = min(payload["ranges"]) < threshold
            if trigger is None and armed and close:
                trigger, anchor = cycle, None
                audit.triggers += 1
            elif not close:
                armed = True
        elif topic == "/odom" and trigger is not None:
            if anchor is None:
                anchor = (payload["x"], payload["y"])
            else:
                check_pose(payload["x"], payload["y"], f"cycle {cycle}")
        elif topic == "/cmd_vel_safe" and trigger is not None and cycle >= trigger + 1:
            audit.checked_commands += 1
            if not _is_zero(payload):
                audit.violations.append(f"cycle {cycle}: non-zero /cmd_vel_safe {payload} after trigger at {trigger}")
        elif topic == control_topic and payload["value"] is False:
            trigger, anchor, armed = None, None, False
    if final_pose is not None and trigger is not None and anchor is not None:
        check_pose(final_pose[0], final_pose[1], "final pose")
    return audit
