"""Operator endpoint: telemetry ingestion, twin upkeep, frames, inputs.

One event loop (the simulation scheduler) owns everything here. Envelopes
arriving from the link update the twin, wall set, and map/plan/mode
stores; a 20 Hz tick advances the twin and hands a frame to whoever is
listening (the UI gateway in interactive runs). Operator inputs, scripted
or from the gateway, are published onto the operator bus, which the
scenario wiring forwards across the lossy link.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from ..core import (
    GoalMsg,
    GridGeometry,
    LaserScan,
    Pose2D,
    TOPIC_CMD_VEL,
    TOPIC_GOAL,
    TOPIC_MAP,
    TOPIC_MODE,
    TOPIC_ODOM,
    TOPIC_PING,
    TOPIC_PLAN,
    TOPIC_PONG,
    TOPIC_SCAN,
    TopicBus,
    Twist,
)
from ..nav.planner import PlanPath
from ..sim.clock import EventScheduler
from .twin import DEFAULT_SMOOTHING_T, DEFAULT_V_PRED, STALENESS_WINDOW, TwinSource, TwinTracker
from .walls import WallSegmentSet

FRAME_HZ = 20.0
TELEOP_HZ = 20.0


@dataclass(frozen=True)
class OperatorConfig:
    v_pred: float = DEFAULT_V_PRED
    smoothing_t: float = DEFAULT_SMOOTHING_T
    staleness: float = STALENESS_WINDOW
    frame_period: float = 1.0 / FRAME_HZ
    teleop_period: float = 1.0 / TELEOP_HZ
    v_max: float = 0.5
    w_max: float = 1.5


class OperatorServer:
    def __init__(
        self,
        bus: TopicBus,
        sched: EventScheduler,
        config: OperatorConfig = OperatorConfig(),
        trace: Callable[[dict], None] | None = None,
        on_frame: Callable[[dict], None] | None = None,
    ):
        self.bus = bus
        self.sched = sched
        self.config = config
        self.trace = trace
        self.on_frame = on_frame

        self.twin = TwinTracker(
            v_pred=config.v_pred,
            smoothing_t=config.smoothing_t,
            staleness=config.staleness,
            on_reconcile=self._record_reconcile,
        )
        self.walls = WallSegmentSet()
        self.map_payload: dict | None = None
        self.map_geometry: GridGeometry | None = None
        self.plan_payload: dict | None = None
        self.mode: str = "remote"
        self.goal_sent: GoalMsg | None = None
        self.operator_events: list[dict] = []
        self.malformed_count = 0
        self.last_odom_at = -float("inf")

        self._map_rev = 0
        self._plan_rev = 0
        self._walls_rev = 0
        self._sent_map = -1
        self._sent_plan = -1
        self._last_seq: dict[str, int] = {}
        self._held_cmd = Twist()
        self._teleop_idle = True  # zero already sent, stay silent

        for topic in (TOPIC_ODOM, TOPIC_SCAN, TOPIC_MAP, TOPIC_PLAN, TOPIC_MODE, TOPIC_PING):
            bus.subscribe(topic, self._on_envelope)

    def start(self) -> None:
        self.sched.every(self.config.frame_period, self._frame_tick)
        self.sched.every(self.config.teleop_period, self._teleop_tick)

    # -- ingestion ---------------------------------------------------------------

    def _on_envelope(self, env) -> None:
        last = self._last_seq.get(env.topic)
        if last is not None and env.seq <= last:
            return  # stale or duplicate ordering
        self._last_seq[env.topic] = env.seq
        now = self.sched.now
        try:
            if env.topic == TOPIC_ODOM:
                pose = Pose2D.from_dict(env.payload["pose"])
                self.twin.ingest_odom(pose, now)
                self.last_odom_at = now
            elif env.topic == TOPIC_PLAN:
                self.twin.ingest_plan(PlanPath.from_payload(env.payload), now)
                self.plan_payload = env.payload
                self._plan_rev += 1
            elif env.topic == TOPIC_SCAN:
                scan = LaserScan.from_payload(env.payload)
                pose = Pose2D.from_dict(env.payload["pose"])
                self.walls.ingest_scan(scan, pose, now)
                self._walls_rev += 1
            elif env.topic == TOPIC_MAP:
                self.map_payload = env.payload
                self.map_geometry = GridGeometry.from_dict(env.payload)
                self._map_rev += 1
            elif env.topic == TOPIC_MODE:
                self.mode = str(env.payload["mode"])
                if env.payload.get("event"):
                    self.operator_events.append({"t": now, "event": env.payload["event"]})
            elif env.topic == TOPIC_PING:
                # Echo immediately; latency here feeds the robot's detector.
                self.bus.publish(
                    TOPIC_PONG,
                    {"seq": int(env.payload["seq"]), "code": 0},
                    stamp=now,
                    source="operator",
                )
        except (KeyError, TypeError, ValueError):
            self.malformed_count += 1

    def _record_reconcile(self, t: float, distance: float) -> None:
        if self.trace is not None:
            self.trace({"t": t, "ev": "reconcile", "teleport": distance})

    # -- operator inputs -----------------------------------------------------------

    def set_teleop(self, v: float, w: float) -> None:
        """Hold a teleop command; it streams at 20 Hz until replaced.
        Setting zero sends a single stop message and goes quiet."""
        self._held_cmd = Twist(v, w).clamped(self.config.v_max, self.config.w_max)
        self._teleop_idle = False

    def send_goal(self, x: float, y: float, theta: float = 0.0) -> bool:
        """Validate against the known map extent and publish the goal."""
        now = self.sched.now
        if self.map_geometry is not None:
            try:
                self.map_geometry.cell_at(x, y)
            except ValueError:
                self.operator_events.append({"t": now, "event": "goal_out_of_bounds"})
                return False
        msg = GoalMsg(stamp=now, pose=Pose2D(x, y, theta))
        self.goal_sent = msg
        self.bus.publish(TOPIC_GOAL, msg.as_payload(), stamp=now, source="operator")
        return True

    def _teleop_tick(self, now: float) -> None:
        if self._teleop_idle:
            return
        self.bus.publish(TOPIC_CMD_VEL, self._held_cmd.as_dict(), stamp=now, source="operator")
        if self._held_cmd.is_zero():
            self._teleop_idle = True  # deadman: one zero, then silence

    # -- frames -----------------------------------------------------------------

    @property
    def link_ok(self) -> bool:
        return self.sched.now - self.last_odom_at <= self.config.staleness

    def current_mode_view(self) -> dict:
        """Best-estimate mode for the UI: /mode when the link is fresh, and
        the contractual inference (goal known + link down -> autonomous)
        during an outage, when the switch envelope itself was lost."""
        assumed = (not self.link_ok) and self.goal_sent is not None
        mode = "autonomous" if assumed and self.mode == "remote" else self.mode
        return {"mode": mode, "assumed": assumed}

    def _frame_tick(self, now: float) -> None:
        state = self.twin.tick(now)
        if self.on_frame is None:
            return
        self.on_frame(self.build_frame(now, state))

    def build_frame(self, now: float, state=None, full: bool = False) -> dict:
        if state is None:
            state = self.twin.state
        frame: dict[str, Any] = {
            "type": "frame",
            "t": now,
            "twin": None
            if state.pose is None
            else {**state.pose.as_dict(), "source": state.source.value},
            "connectivity": "good" if self.link_ok else "bad",
            **self.current_mode_view(),
            "walls": self.walls.segments_at(now),
            "revs": {"map": self._map_rev, "plan": self._plan_rev},
        }
        if self.goal_sent is not None:
            frame["goal"] = self.goal_sent.pose.as_dict()
        # Deltas carry the map/plan only when changed since the last frame;
        # a full snapshot always embeds them.
        if full or self._map_rev > self._sent_map:
            frame["map"] = self.map_payload
        if full or self._plan_rev > self._sent_plan:
            frame["plan"] = self.plan_payload
        if full:
            frame["full"] = True
        else:
            self._sent_map = self._map_rev
            self._sent_plan = self._plan_rev
        return frame
