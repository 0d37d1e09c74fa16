"""Robot-side supervisor: sensing, mapping, navigation, and failover.

One 50 Hz control loop owns all robot state. Inbound envelopes queue up
and drain at the start of each tick (pongs are handled immediately since
the ping monitor owns its own timing). While the link is good the robot
executes operator twists; when the ping monitor debounces to bad and a
goal is known, it switches itself to autonomous mode, republishes the last
goal, and drives the planner/follower until the link returns.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ..core import (
    DEFAULT_V_MAX,
    DEFAULT_W_MAX,
    GoalMsg,
    LaserScan,
    Pose2D,
    ScanConfig,
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
from ..mapping import DEFAULT_RESOLUTION, OccupancyGrid, classify, integrate_scan
from ..nav import (
    DEFAULT_COST_DECAY,
    DEFAULT_COST_WEIGHT,
    DEFAULT_INFLATION_RADIUS,
    FollowParams,
    GoalInCollisionError,
    NoPathError,
    PathMaintainer,
    build_costmap,
    follow_path,
    goal_reached,
)
from ..netlink.ping import DEBOUNCE_K, PING_INTERVAL, PING_TIMEOUT, ConnectivityStatus, PingMonitor
from ..sim.clock import EventScheduler
from ..sim.robot import CONTROL_DT, NO_NOISE, RobotState, SensorNoise, step_robot
from ..sim.world import WorldModel


class Mode(enum.Enum):
    REMOTE = "remote"
    AUTONOMOUS = "autonomous"


@dataclass(frozen=True)
class Transition:
    stamp: float
    from_mode: Mode
    to_mode: Mode
    reason: str


@dataclass
class ModeState:
    mode: Mode = Mode.REMOTE
    last_goal: GoalMsg | None = None
    since: float = 0.0


@dataclass(frozen=True)
class AgentConfig:
    control_dt: float = CONTROL_DT
    odom_period: float = 0.1
    map_period: float = 1.0
    scan: ScanConfig = ScanConfig()
    v_max: float = DEFAULT_V_MAX
    w_max: float = DEFAULT_W_MAX
    cmd_timeout: float = 0.5        # teleop older than this is stale, robot stops
    remote_autonav: bool = False    # goals auto-followed even while remote-controlled
    map_resolution: float = DEFAULT_RESOLUTION
    inflation_radius: float = DEFAULT_INFLATION_RADIUS
    cost_decay: float = DEFAULT_COST_DECAY
    cost_weight: float = DEFAULT_COST_WEIGHT
    # Planning pads the robot footprint: the occupancy of a moving obstacle
    # lags ground truth by the log-odds flip time, and pure pursuit cuts
    # corners inside the planned path.
    planning_margin: float = 0.15
    replan_period: float = 2.0
    ping_k: int = DEBOUNCE_K
    ping_interval: float = PING_INTERVAL
    ping_timeout: float = PING_TIMEOUT

    def follow_params(self) -> FollowParams:
        # Stop tolerance tighter than the goal check: path ends on a cell
        # center up to res*sqrt(2)/2 from the goal, and the parked pose must
        # still fall inside the reported 0.10 m tolerance.
        return FollowParams(v_max=self.v_max, w_max=self.w_max, tol_pos=0.06)


class RobotAgent:
    def __init__(
        self,
        world: WorldModel,
        bus: TopicBus,
        sched: EventScheduler,
        config: AgentConfig = AgentConfig(),
        noise: SensorNoise = NO_NOISE,
        scan_rng: np.random.Generator | None = None,
        odom_rng: np.random.Generator | None = None,
        initial_map: OccupancyGrid | None = None,
        trace: Callable[[dict], None] | None = None,
    ):
        self.world = world
        self.bus = bus
        self.sched = sched
        self.config = config
        self.noise = noise
        self.scan_rng = scan_rng
        self.odom_rng = odom_rng
        self.trace = trace

        self.state = RobotState.at(world.robot_start, stamp=sched.now)
        self.grid = initial_map if initial_map is not None else OccupancyGrid.for_extent(
            world.bounds, config.map_resolution
        )
        self.mode_state = ModeState(since=sched.now)
        self.transitions: list[Transition] = []
        self.maintainer = PathMaintainer(cost_weight=config.cost_weight, replan_period=config.replan_period)
        self.monitor = PingMonitor(
            sched,
            send_ping=self._publish_ping,
            k=config.ping_k,
            interval=config.ping_interval,
            timeout=config.ping_timeout,
        )

        self._inbox: list = []
        self._last_cmd: tuple[Twist, float] | None = None
        self._costmap = None
        self._costmap_dirty = True
        self._map_empty = True
        self._last_plan_payload: dict | None = None
        self._parked_goal: GoalMsg | None = None
        self._follow = config.follow_params()

        # run metrics
        self.collision_count = 0
        self.path_length = 0.0
        self.time_to_goal: float | None = None
        self._was_collided = False

        bus.subscribe(TOPIC_CMD_VEL, self._inbox.append)
        bus.subscribe(TOPIC_GOAL, self._inbox.append)
        bus.subscribe(TOPIC_PONG, self._on_pong)

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> None:
        self.monitor.start()
        self.sched.every(self.config.control_dt, self._control_tick)
        self.sched.every(self.config.scan.period, self._scan_tick)
        self.sched.every(self.config.odom_period, self._publish_odom)
        self.sched.every(self.config.map_period, self._publish_map)

    # -- inbound -------------------------------------------------------------

    def _on_pong(self, env) -> None:
        try:
            self.monitor.on_pong(int(env.payload["seq"]))
        except (KeyError, TypeError, ValueError):
            pass  # malformed pong: treated as a miss via the timeout

    def _drain_inbox(self, now: float) -> None:
        pending = self._inbox[:]
        self._inbox.clear()
        for env in pending:
            if env.topic == TOPIC_CMD_VEL:
                try:
                    self._last_cmd = (Twist.from_dict(env.payload), now)
                except (KeyError, TypeError, ValueError):
                    continue
            elif env.topic == TOPIC_GOAL:
                try:
                    self.handle_goal(GoalMsg.from_payload(env.payload), now)
                except (KeyError, TypeError, ValueError):
                    continue

    def handle_goal(self, msg: GoalMsg, now: float) -> None:
        """Store the goal if it falls inside the map; reject otherwise."""
        geom = self.grid.geometry
        try:
            geom.cell_at(msg.pose.x, msg.pose.y)
        except ValueError:
            self._publish_mode(now, event="goal_rejected")
            return
        self.mode_state.last_goal = msg

    # -- mode machine ---------------------------------------------------------

    def _transition(self, to_mode: Mode, reason: str, now: float) -> None:
        tr = Transition(stamp=now, from_mode=self.mode_state.mode, to_mode=to_mode, reason=reason)
        self.transitions.append(tr)
        if self.trace is not None:
            self.trace(
                {"t": now, "ev": "transition", "from": tr.from_mode.value, "to": tr.to_mode.value, "reason": reason}
            )
        self.mode_state.mode = to_mode
        self.mode_state.since = now
        self._publish_mode(now)

    def supervise(self, status: ConnectivityStatus, now: float) -> None:
        mode = self.mode_state.mode
        if mode is Mode.REMOTE and not status.good and self.mode_state.last_goal is not None:
            self._transition(Mode.AUTONOMOUS, "link-lost", now)
            self._last_cmd = None
            # Kick navigation exactly the way an operator goal would.
            self.bus.publish(
                TOPIC_GOAL, self.mode_state.last_goal.as_payload(), stamp=now, source="robot"
            )
        elif mode is Mode.AUTONOMOUS and status.good:
            self._transition(Mode.REMOTE, "link-restored", now)
            self._last_cmd = None  # wait for fresh operator input

    # -- control loop ---------------------------------------------------------

    def _control_tick(self, now: float) -> None:
        self._drain_inbox(now)
        self.supervise(self.monitor.status, now)

        plan = self._update_plan(now)

        if self.mode_state.mode is Mode.AUTONOMOUS:
            cmd = self._follow_cmd(plan)
        else:
            cmd = self._remote_cmd(now, plan)

        self.world.advance(self.config.control_dt)
        prev = self.state
        self.state = step_robot(
            prev,
            cmd,
            self.config.control_dt,
            self.world,
            noise=self.noise,
            rng=self.odom_rng,
            v_max=self.config.v_max,
            w_max=self.config.w_max,
        )
        self.path_length += math.hypot(self.state.pose.x - prev.pose.x, self.state.pose.y - prev.pose.y)
        if self.state.collided and not self._was_collided:
            self.collision_count += 1
            if self.trace is not None:
                self.trace({"t": now, "ev": "collision"})
        self._was_collided = self.state.collided

        goal = self.mode_state.last_goal
        if goal is not None and self.time_to_goal is None:
            if goal_reached(self.state.pose, goal.pose):
                self.time_to_goal = now

    def _remote_cmd(self, now: float, plan) -> Twist:
        if not self.monitor.status.good:
            return Twist()  # bad link, no goal: hold position
        if self.config.remote_autonav:
            return self._follow_cmd(plan)
        if self._last_cmd is None:
            return Twist()
        cmd, stamp = self._last_cmd
        if now - stamp > self.config.cmd_timeout:
            return Twist()  # stale teleop is unsafe
        return cmd

    def _follow_cmd(self, plan) -> Twist:
        if plan is None:
            return Twist()  # no route right now: stop, retry next tick
        cmd, reached = follow_path(self.state.odom_pose, plan, self._follow)
        if reached:
            self._parked_goal = self.mode_state.last_goal
            return Twist()
        return cmd

    def _update_plan(self, now: float):
        """Keep a plan fresh whenever a goal is known; publish changes.

        Once the follower has parked at a goal, planning pauses until the
        goal changes, so replan churn cannot nudge the robot around the
        goal cell."""
        goal = self.mode_state.last_goal
        if goal is None or self._map_empty:
            return None
        if self._parked_goal is not None and self._parked_goal.pose == goal.pose:
            return None
        costmap = self._get_costmap(now)
        try:
            plan, replanned = self.maintainer.replan_if_needed(costmap, self.state.odom_pose, goal.pose, now)
        except (NoPathError, GoalInCollisionError):
            return None
        if replanned:
            payload = plan.as_payload()
            if payload != self._last_plan_payload:
                self._last_plan_payload = payload
                self.bus.publish(TOPIC_PLAN, payload, stamp=now, source="robot")
        return plan

    def _get_costmap(self, now: float):
        if self._costmap is None or self._costmap_dirty:
            msg = classify(self.grid, stamp=now)
            padded = self.world.robot_radius + self.config.planning_margin
            self._costmap = build_costmap(
                msg,
                robot_radius=padded,
                inflation_radius=max(self.config.inflation_radius, padded),
                decay=self.config.cost_decay,
            )
            self._costmap_dirty = False
        return self._costmap

    # -- sensing and telemetry -------------------------------------------------

    def _scan_tick(self, now: float) -> None:
        scan = self._simulate_scan(now)
        integrate_scan(self.grid, self.state.odom_pose, scan)
        self._costmap_dirty = True
        self._map_empty = False
        payload = scan.as_payload()
        payload["pose"] = self.state.odom_pose.as_dict()
        self.bus.publish(TOPIC_SCAN, payload, stamp=now, source="robot")

    def _simulate_scan(self, now: float) -> LaserScan:
        from ..sim.sensors import simulate_scan

        return simulate_scan(
            self.world, self.state.pose, self.config.scan, noise=self.noise, rng=self.scan_rng, stamp=now
        )

    def _publish_odom(self, now: float) -> None:
        self.bus.publish(
            TOPIC_ODOM,
            {"pose": self.state.odom_pose.as_dict(), "twist": self.state.twist.as_dict(), "stamp": now},
            stamp=now,
            source="robot",
        )

    def _publish_map(self, now: float) -> None:
        if self._map_empty:
            return
        msg = classify(self.grid, stamp=now)
        self.bus.publish(TOPIC_MAP, msg.as_payload(), stamp=now, source="robot")

    def _publish_mode(self, now: float, event: str | None = None) -> None:
        payload = {"mode": self.mode_state.mode.value, "stamp": now}
        if event is not None:
            payload["event"] = event
        self.bus.publish(TOPIC_MODE, payload, stamp=now, source="robot")

    def _publish_ping(self, seq: int) -> None:
        self.bus.publish(TOPIC_PING, {"seq": seq}, stamp=self.sched.now, source="robot")
