"""Line-delimited JSON trace of a run.

One record per line with fields ``t``, ``kind``, ``topic``, ``payload`` and
``seq``. ``kind`` is one of publish, collision, intervention, warning.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

KINDS = ("publish", "collision", "intervention", "warning")


@dataclass(frozen=True)
class TraceEvent:
    t: float
    kind: str
    topic: str | None = None
    payload: Any = None
    seq: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown trace event kind {self.kind!r}")


def to_jsonable(value: Any) -> Any:
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    return value


class Trace:
    """In-memory event log, written out as JSON lines."""

    def __init__(self) -> None:
        self.events: list[TraceEvent] = []

    def on_publish(self, msg) -> None:
        self.events.append(TraceEvent(msg.t, "publish", msg.topic, msg.payload, msg.seq))

    def record(self, kind: str, t: float, topic: str | None = None, payload: Any = None) -> None:
        if self.events and t < self.events[-1].t:
            raise ValueError("trace time must be non-decreasing")
        self.events.append(TraceEvent(t, kind, topic, payload))

    def to_jsonl(self) -> str:
        return "".join(encode_event(e) + "\n" for e in self.events)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def encode_event(e: TraceEvent) -> str:
    record = {"t": e.t, "kind": e.kind, "topic": e.topic, "payload": to_jsonable(e.payload), "seq": e.seq}
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def read_trace(path: str | Path) -> list[dict]:
    return parse_trace(Path(path).read_text().splitlines())


def parse_trace(lines: Iterable[str]) -> list[dict]:
    return [json.loads(line) for line in lines if line.strip()]
