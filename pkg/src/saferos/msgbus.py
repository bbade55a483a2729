"""Deterministic in-process publish/subscribe bus with ROS-like topics.

Topics are declared up front with a payload type. Every subscriber owns a
FIFO queue and only sees messages published after it subscribed. Each
publication is also mirrored to an optional trace.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
import logging
from typing import Any, Mapping

from saferos.messages import Flag, Goal, RobotState, Scan, Twist
from saferos.trace import Trace

log = logging.getLogger(__name__)


class BusError(Exception):
    pass


class UnknownTopic(BusError):
    pass


class PayloadTypeMismatch(BusError):
    pass


class InvalidTopicName(BusError):
    pass


def check_topic_name(name: str) -> str:
    if not isinstance(name, str) or not name.startswith("/") or len(name) < 2:
        raise InvalidTopicName(f"topic names must be non-empty and start with '/': {name!r}")
    return name


# Default wiring for the mission loop.
DEFAULT_TOPICS: dict[str, type] = {
    "/scan": Scan,
    "/odom": RobotState,
    "/goal": Goal,
    "/cmd_vel": Twist,
    "/cmd_vel_safe": Twist,
    "/gwendolen_control": Flag,
}


@dataclass(frozen=True)
class BusMessage:
    topic: str
    payload: Any
    seq: int
    t: float


@dataclass
class SubscriberQueue:
    topic: str
    pending: deque = field(default_factory=deque)

    def __len__(self) -> int:
        return len(self.pending)


class MessageBus:
    """Topic registry plus per-subscriber FIFO queues.

    ``now`` is the simulation clock stamped on new messages; the mission
    loop advances it.
    """

    def __init__(self, topics: Mapping[str, type] | None = None, trace: Trace | None = None) -> None:
        topics = DEFAULT_TOPICS if topics is None else topics
        self._schema = {check_topic_name(name): typ for name, typ in topics.items()}
        self._subscribers: dict[str, list[SubscriberQueue]] = {name: [] for name in self._schema}
        self._next_seq: dict[str, int] = {name: 0 for name in self._schema}
        self.trace = trace
        self.now = 0.0

    @property
    def topics(self) -> dict[str, type]:
        return dict(self._schema)

    def _require(self, topic: str) -> type:
        try:
            return self._schema[topic]
        except KeyError:
            raise UnknownTopic(topic) from None

    def publish(self, topic: str, payload: Any) -> int:
        expected = self._require(topic)
        if not isinstance(payload, expected):
            raise PayloadTypeMismatch(
                f"{topic} carries {expected.__name__}, got {type(payload).__name__}"
            )
        seq = self._next_seq[topic]
        self._next_seq[topic] = seq + 1
        msg = BusMessage(topic, payload, seq, self.now)
        for queue in self._subscribers[topic]:
            queue.pending.append(msg)
        if self.trace is not None:
            self.trace.on_publish(msg)
        return seq

    def record(self, kind: str, payload: Any = None, topic: str | None = None) -> None:
        """Log a non-publication event (collision, intervention, warning)."""
        if kind == "warning":
            log.warning("%s: %s", topic or "bus", payload)
        if self.trace is not None:
            self.trace.record(kind, self.now, topic, payload)

    def subscribe(self, topic: str) -> SubscriberQueue:
        self._require(topic)
        queue = SubscriberQueue(topic)
        self._subscribers[topic].append(queue)
        return queue


def poll(queue: SubscriberQueue) -> BusMessage | None:
    if queue.pending:
        return queue.pending.popleft()
    return None


def drain(queue: SubscriberQueue) -> list[BusMessage]:
    out = list(queue.pending)
    queue.pending.clear()
    return out


def latest(queue: SubscriberQueue) -> BusMessage | None:
    """Drop everything but the newest pending message and return it."""
    msg = None
    while queue.pending:
        msg = queue.pending.popleft()
    return msg
