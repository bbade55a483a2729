"""The velocity interceptor and an executable check of its contract.

The interceptor holds one bit, ``stop_requested``. Stop messages overwrite
it; velocity commands are forwarded unchanged while it is false and
replaced by the zero twist while it is true.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from saferos.messages import ZERO_TWIST, Twist
from saferos.msgbus import MessageBus, drain

GRID_VALUES = (-1.0, 0.0, 0.5, 1.0)


@dataclass(frozen=True)
class InterceptorState:
    stop_requested: bool = False


def stop_callback(state: InterceptorState, msg: bool) -> InterceptorState:
    return InterceptorState(bool(msg))


def cmd_vel_callback(state: InterceptorState, msg: Twist) -> Twist:
    return ZERO_TWIST if state.stop_requested else msg


class CmdVelInterceptor:
    """Stateful form used by the bus node and the contract harness."""

    def __init__(self) -> None:
        self.state = InterceptorState()

    @property
    def stop_requested(self) -> bool:
        return self.state.stop_requested

    def stop_callback(self, msg: bool) -> None:
        self.state = stop_callback(self.state, msg)

    def cmd_vel_callback(self, msg: Twist) -> Twist:
        return cmd_vel_callback(self.state, msg)


# Deliberately broken variants; the harness must reject each of them.


class ForwardWhenStopped(CmdVelInterceptor):
    def cmd_vel_callback(self, msg: Twist) -> Twist:
        return msg


class StickyStop(CmdVelInterceptor):
    def stop_callback(self, msg: bool) -> None:
        if msg:
            super().stop_callback(True)


class LinearOnlyStop(CmdVelInterceptor):
    def cmd_vel_callback(self, msg: Twist) -> Twist:
        if self.stop_requested:
            return Twist(0.0, 0.0, msg.angular_z)
        return msg


MUTANTS = (ForwardWhenStopped, StickyStop, LinearOnlyStop)


@dataclass
class ContractReport:
    grid_cases: int = 0
    stop_cases: int = 0
    random_sequences: int = 0
    violations: int = 0
    counterexample: str | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def fail(self, what: str) -> None:
        self.violations += 1
        if self.counterexample is None:
            self.counterexample = what
        if len(self.failures) < 20:
            self.failures.append(what)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{status}: {self.grid_cases} grid cases, {self.stop_cases} stop cases, "
            f"{self.random_sequences} random sequences, {self.violations} violations"
        )
        if self.counterexample:
            text += f"\nfirst counterexample: {self.counterexample}"
        return text


def _in_state(impl_cls, stop: bool):
    impl = impl_cls()
    impl.stop_callback(stop)
    return impl


def _random_twist(rng: np.random.Generator) -> Twist:
    if rng.random() < 0.5:
        return Twist(*(float(v) for v in rng.choice(GRID_VALUES, size=3)))
    return Twist(*(float(v) for v in rng.uniform(-1.0, 1.0, size=3)))


def check_contract(n_random: int = 10_000, seed: int = 0, impl=CmdVelInterceptor) -> ContractReport:
    """Check the interceptor contract on an exhaustive grid and random interleavings.

    Obligations: a fresh interceptor has no stop requested; after
    ``stop_callback(m)`` the flag equals ``m``; ``cmd_vel_callback`` returns
    the zero twist when stopped, the input otherwise, and leaves the flag
    alone. The random part replays interleaved callback sequences and
    compares every output against the most recent stop message.
    """
    if n_random < 0:
        raise ValueError("n_random must be >= 0")
    report = ContractReport()

    if impl().stop_requested is not False:
        report.fail("constructor: stop_requested is not initially false")

    for before, msg in itertools.product((False, True), repeat=2):
        report.stop_cases += 1
        obj = _in_state(impl, before)
        obj.stop_callback(msg)
        if obj.stop_requested != msg:
            report.fail(f"stop_callback: state {before}, msg {msg} -> stop_requested {obj.stop_requested}")

    for stop in (False, True):
        for vals in itertools.product(GRID_VALUES, repeat=3):
            report.grid_cases += 1
            msg = Twist(*vals)
            obj = _in_state(impl, stop)
            flag = obj.stop_requested
            out = obj.cmd_vel_callback(msg)
            expected = ZERO_TWIST if flag else msg
            if out != expected:
                report.fail(f"cmd_vel_callback: stop_requested={flag}, msg={msg} -> {out}")
            if obj.stop_requested != flag:
                report.fail(f"cmd_vel_callback changed stop_requested for msg={msg}")

    rng = np.random.default_rng(seed)
    for k in range(n_random):
        report.random_sequences += 1
        obj = impl()
        last_stop = False
        history: list[str] = []
        for _ in range(int(rng.integers(1, 21))):
            if rng.random() < 0.4:
                last_stop = bool(rng.random() < 0.5)
                obj.stop_callback(last_stop)
                history.append(f"stop({last_stop})")
                continue
            msg = _random_twist(rng)
            out = obj.cmd_vel_callback(msg)
            history.append(f"cmd({msg.linear_x:g},{msg.linear_y:g},{msg.angular_z:g})")
            if out != (ZERO_TWIST if last_stop else msg):
                report.fail(f"sequence {k}: {' '.join(history)} -> {out}")
                break
    return report


class InterceptorNode:
    """Bus wiring: stop flags and velocity commands in, safe commands out."""

    def __init__(
        self,
        bus: MessageBus,
        impl: CmdVelInterceptor | None = None,
        control_topic: str = "/gwendolen_control",
        cmd_topic: str = "/cmd_vel",
        out_topic: str = "/cmd_vel_safe",
    ) -> None:
        self.bus = bus
        self.impl = impl or CmdVelInterceptor()
        self.out_topic = out_topic
        self._control = bus.subscribe(control_topic)
        self._cmd = bus.subscribe(cmd_topic)

    def spin_once(self) -> list[Twist]:
        """Consume pending stop flags first, then pending commands."""
        for msg in drain(self._control):
            self.impl.stop_callback(msg.payload.value)
        outs = []
        for msg in drain(self._cmd):
            out = self.impl.cmd_vel_callback(msg.payload)
            self.bus.publish(self.out_topic, out)
            outs.append(out)
        return outs
