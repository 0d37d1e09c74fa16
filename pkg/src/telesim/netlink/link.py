"""Fault-injectable point-to-point link between the two endpoints.

Drops are decided at send time: during an outage interval everything is
discarded silently, otherwise an independent seeded coin decides loss.
Delivered envelopes arrive after base latency plus Gaussian jitter, with
per-direction delivery times forced non-decreasing so FIFO order holds
among the survivors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..core import Envelope
from ..sim.clock import EventScheduler

ROBOT_TO_OPERATOR = "r2o"
OPERATOR_TO_ROBOT = "o2r"
DIRECTIONS = (ROBOT_TO_OPERATOR, OPERATOR_TO_ROBOT)


@dataclass(frozen=True)
class LinkConfig:
    base_latency: float = 0.02
    jitter_std: float = 0.005
    loss_prob: float = 0.0
    outages: tuple[tuple[float, float], ...] = ()
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.loss_prob <= 1.0:
            raise ValueError(f"loss_prob must be in [0, 1], got {self.loss_prob}")
        if self.base_latency < 0 or self.jitter_std < 0:
            raise ValueError("latency and jitter must be >= 0")
        outages = tuple((float(a), float(b)) for a, b in self.outages)
        object.__setattr__(self, "outages", outages)
        prev_end = -float("inf")
        for a, b in outages:
            if b <= a:
                raise ValueError(f"outage [{a}, {b}) is empty or inverted")
            if a < prev_end:
                raise ValueError("outage intervals must be sorted and non-overlapping")
            prev_end = b

    def in_outage(self, t: float) -> bool:
        return any(a <= t < b for a, b in self.outages)

    @classmethod
    def from_dict(cls, d: dict) -> "LinkConfig":
        return cls(
            base_latency=float(d.get("base_latency", 0.02)),
            jitter_std=float(d.get("jitter_std", 0.005)),
            loss_prob=float(d.get("loss_prob", 0.0)),
            outages=tuple(tuple(iv) for iv in d.get("outages", ())),
            seed=int(d.get("seed", 0)),
        )


@dataclass
class LinkStats:
    sent: dict = field(default_factory=lambda: {d: 0 for d in DIRECTIONS})
    delivered: dict = field(default_factory=lambda: {d: 0 for d in DIRECTIONS})
    dropped: dict = field(default_factory=lambda: {d: 0 for d in DIRECTIONS})


class LossyLink:
    """Bidirectional lossy channel driven by the simulation scheduler.

    deliver callbacks receive envelopes on the far side; a trace callback,
    when given, sees one event dict per send/drop/delivery.
    """

    def __init__(
        self,
        config: LinkConfig,
        sched: EventScheduler,
        deliver: dict[str, Callable[[Envelope], None]],
        trace: Callable[[dict], None] | None = None,
        rng: np.random.Generator | None = None,
    ):
        self.config = config
        self.sched = sched
        self.deliver = dict(deliver)
        for d in DIRECTIONS:
            self.deliver.setdefault(d, lambda env: None)
        self.trace = trace
        self.rng = rng if rng is not None else np.random.default_rng(config.seed)
        self.stats = LinkStats()
        self.forced_outage = False
        self._last_delivery = {d: -float("inf") for d in DIRECTIONS}

    def force_outage(self, active: bool) -> None:
        """Manual outage override (interactive scenario control)."""
        self.forced_outage = active

    def send(self, direction: str, env: Envelope) -> None:
        if direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {direction!r}")
        now = self.sched.now
        self.stats.sent[direction] += 1
        self._trace("send", direction, env, now)

        if self.forced_outage or self.config.in_outage(now):
            self._drop(direction, env, now, "outage")
            return
        if self.config.loss_prob > 0 and self.rng.random() < self.config.loss_prob:
            self._drop(direction, env, now, "loss")
            return

        delay = self.config.base_latency
        if self.config.jitter_std > 0:
            delay += self.config.jitter_std * float(self.rng.standard_normal())
        t_deliver = now + max(0.0, delay)
        # FIFO per direction: never deliver before an earlier envelope.
        t_deliver = max(t_deliver, self._last_delivery[direction])
        self._last_delivery[direction] = t_deliver
        self.sched.at(t_deliver, lambda t, d=direction, e=env: self._deliver(d, e, t))

    def _deliver(self, direction: str, env: Envelope, now: float) -> None:
        self.stats.delivered[direction] += 1
        self._trace("deliver", direction, env, now)
        self.deliver[direction](env)

    def _drop(self, direction: str, env: Envelope, now: float, reason: str) -> None:
        self.stats.dropped[direction] += 1
        self._trace("drop", direction, env, now, reason)

    def _trace(self, ev: str, direction: str, env: Envelope, now: float, reason: str | None = None) -> None:
        if self.trace is None:
            return
        entry = {"t": now, "ev": ev, "dir": direction, "topic": env.topic, "seq": env.seq}
        if reason is not None:
            entry["reason"] = reason
        self.trace(entry)
