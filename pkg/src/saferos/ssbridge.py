"""Environment glue between the bus and the safety agent.

Scans become the ``too_close`` percept when the nearest return is under the
threshold; the agent's ``stop_moving`` action becomes ``Flag(True)`` on the
control topic. The agent never publishes ``Flag(False)``, so a stop latches
until an operator reset.
"""

from __future__ import annotations

from dataclasses import dataclass

from saferos.agentlang import AgentProgram, AgentState, agent_cycle
from saferos.messages import EmptyScan, Flag, Scan
from saferos.msgbus import MessageBus, check_topic_name, latest

TOO_CLOSE = "too_close"
STOP_ACTION = "stop_moving"


@dataclass(frozen=True)
class SafetyEnvConfig:
    scan_topic: str = "/scan"
    control_topic: str = "/gwendolen_control"
    threshold: float = 0.05

    def __post_init__(self) -> None:
        check_topic_name(self.scan_topic)
        check_topic_name(self.control_topic)
        if not self.threshold > 0:
            raise ValueError("threshold must be > 0")


def scan_to_percepts(scan: Scan, cfg: SafetyEnvConfig) -> frozenset[str]:
    if not scan.ranges:
        raise EmptyScan("scan has no ranges; refusing to treat a dead sensor as clear")
    return frozenset({TOO_CLOSE}) if min(scan.ranges) < cfg.threshold else frozenset()


def execute_action(action: str, cfg: SafetyEnvConfig, bus: MessageBus) -> None:
    if action == STOP_ACTION:
        seq = bus.publish(cfg.control_topic, Flag(True))
        bus.record("intervention", {"action": action, "seq": seq}, cfg.control_topic)
    else:
        bus.record("warning", {"unknown_action": action})


def sif_tick(
    state: AgentState,
    program: AgentProgram,
    scan: Scan | None,
    cfg: SafetyEnvConfig,
    bus: MessageBus,
) -> AgentState:
    if scan is None:
        raise RuntimeError("safety function ticked before any scan arrived")
    state, actions = agent_cycle(state, program, scan_to_percepts(scan, cfg))
    for action in actions:
        execute_action(action, cfg, bus)
    return state


class SafetyNode:
    """Runs the safety agent against the newest scan on each tick."""

    def __init__(self, program: AgentProgram, bus: MessageBus, cfg: SafetyEnvConfig | None = None) -> None:
        self.program = program
        self.bus = bus
        self.cfg = cfg or SafetyEnvConfig()
        self.state = AgentState()
        self.latest_scan: Scan | None = None
        self._scans = bus.subscribe(self.cfg.scan_topic)

    def tick(self) -> AgentState:
        msg = latest(self._scans)
        if msg is not None:
            self.latest_scan = msg.payload
        self.state = sif_tick(self.state, self.program, self.latest_scan, self.cfg, self.bus)
        return self.state
