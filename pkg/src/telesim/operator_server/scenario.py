"""Scenario files and the end-to-end simulation harness.

A scenario document fully determines a headless run: world, link faults,
sensor noise, the scripted operator, duration, and seed. The runner wires
robot agent <-> lossy link <-> operator server on one event scheduler,
collects a JSON-lines event trace (sends, drops, deliveries, transitions,
collisions, reconciliations), and reduces the run to a metrics summary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..core import OPERATOR_OUTBOUND, ROBOT_OUTBOUND, ScanConfig, TopicBus
from ..mapping import OccupancyGrid, load_map
from ..netlink import LinkConfig, LossyLink, OPERATOR_TO_ROBOT, ROBOT_TO_OPERATOR
from ..robot_agent import AgentConfig, RobotAgent
from ..sim import EventScheduler, SensorNoise, WorldModel, load_world
from .server import OperatorConfig, OperatorServer
from .twin import DEFAULT_SMOOTHING_T, DEFAULT_V_PRED

SCENARIO_SCHEMA = 1


class ScenarioError(ValueError):
    """Scenario document malformed; refused before any simulation starts."""


@dataclass(frozen=True)
class ScriptEvent:
    t: float
    kind: str  # teleop | goal | force_outage
    args: dict

    _KINDS = ("teleop", "goal", "force_outage")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ScenarioError(f"unknown script event type {self.kind!r}")
        if self.t < 0:
            raise ScenarioError(f"script event at negative time {self.t}")


@dataclass
class ScenarioConfig:
    name: str
    world: WorldModel
    duration: float
    seed: int
    link: LinkConfig = LinkConfig()
    noise: SensorNoise = SensorNoise(range_noise_rel=0.0, range_noise_rel_far=0.0)
    script: tuple[ScriptEvent, ...] = ()
    v_pred: float = DEFAULT_V_PRED
    smoothing_t: float = DEFAULT_SMOOTHING_T
    initial_map: OccupancyGrid | None = None
    remote_autonav: bool = False
    scan_samples: int | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "ScenarioConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError(f"{path}: cannot read scenario: {exc}") from exc
        return cls.from_dict(doc, base_dir=path.parent)

    @classmethod
    def from_dict(cls, doc: dict, base_dir: Path | None = None) -> "ScenarioConfig":
        if not isinstance(doc, dict):
            raise ScenarioError("scenario document must be a JSON object")
        if doc.get("schema") != SCENARIO_SCHEMA:
            raise ScenarioError(f"unsupported scenario schema {doc.get('schema')!r}, expected {SCENARIO_SCHEMA}")
        for key in ("name", "world", "duration", "seed"):
            if key not in doc:
                raise ScenarioError(f"scenario missing required key {key!r}")
        base = base_dir if base_dir is not None else Path(".")
        try:
            world = load_world(base / doc["world"])
        except ValueError as exc:
            raise ScenarioError(f"scenario world: {exc}") from exc
        initial_map = None
        if doc.get("map"):
            try:
                initial_map = load_map(base / doc["map"])
            except ValueError as exc:
                raise ScenarioError(f"scenario map: {exc}") from exc
        duration = float(doc["duration"])
        if duration <= 0:
            raise ScenarioError(f"duration must be > 0, got {duration}")
        try:
            link = LinkConfig.from_dict(doc.get("link", {}))
        except ValueError as exc:
            raise ScenarioError(f"scenario link config: {exc}") from exc
        noise_doc = doc.get("noise", {})
        noise = SensorNoise(
            range_noise_rel=float(noise_doc.get("range_noise_rel", 0.0)),
            range_noise_rel_far=float(noise_doc.get("range_noise_rel_far", 0.0)),
            odom_noise_std=tuple(noise_doc.get("odom_noise_std", (0.0, 0.0))),
        )
        script = []
        for i, ev in enumerate(doc.get("script", [])):
            if not isinstance(ev, dict) or "t" not in ev or "type" not in ev:
                raise ScenarioError(f"script[{i}] needs 't' and 'type'")
            args = {k: v for k, v in ev.items() if k not in ("t", "type")}
            script.append(ScriptEvent(t=float(ev["t"]), kind=str(ev["type"]), args=args))
        script.sort(key=lambda e: e.t)
        return cls(
            name=str(doc["name"]),
            world=world,
            duration=duration,
            seed=int(doc["seed"]),
            link=link,
            noise=noise,
            script=tuple(script),
            v_pred=float(doc.get("v_pred", DEFAULT_V_PRED)),
            smoothing_t=float(doc.get("smoothing_t", DEFAULT_SMOOTHING_T)),
            initial_map=initial_map,
            remote_autonav=bool(doc.get("remote_autonav", False)),
            scan_samples=int(doc["scan_samples"]) if "scan_samples" in doc else None,
        )


@dataclass
class RunMetrics:
    scenario: str
    duration: float
    seed: int
    time_to_goal: float | None
    goal_reached: bool
    final_distance_to_goal: float | None
    path_length: float
    mode_switches: int
    transitions: list[dict]
    teleports: list[float]
    collision_count: int
    link: dict
    malformed_envelopes: int

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "duration": self.duration,
            "seed": self.seed,
            "time_to_goal": self.time_to_goal,
            "goal_reached": self.goal_reached,
            "final_distance_to_goal": self.final_distance_to_goal,
            "path_length": self.path_length,
            "mode_switches": self.mode_switches,
            "transitions": self.transitions,
            "teleports": self.teleports,
            "collision_count": self.collision_count,
            "link": self.link,
            "malformed_envelopes": self.malformed_envelopes,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


class Simulation:
    """Fully wired two-endpoint simulation over a fault-injected link."""

    def __init__(
        self,
        cfg: ScenarioConfig,
        on_frame: Callable[[dict], None] | None = None,
        debug_truth: bool = False,
    ):
        self.cfg = cfg
        self.sched = EventScheduler()
        self.trace_events: list[dict] = []
        self.debug_truth = debug_truth
        trace = self.trace_events.append

        seeds = np.random.SeedSequence(cfg.seed).spawn(3)
        link_rng = np.random.default_rng(seeds[0])
        scan_rng = np.random.default_rng(seeds[1])
        odom_rng = np.random.default_rng(seeds[2])

        self.robot_bus = TopicBus()
        self.operator_bus = TopicBus()
        self.link = LossyLink(
            cfg.link,
            self.sched,
            deliver={
                ROBOT_TO_OPERATOR: self.operator_bus.deliver,
                OPERATOR_TO_ROBOT: self.robot_bus.deliver,
            },
            trace=trace,
            rng=link_rng,
        )
        for topic in ROBOT_OUTBOUND:
            self.robot_bus.subscribe(topic, lambda env: self.link.send(ROBOT_TO_OPERATOR, env))
        for topic in OPERATOR_OUTBOUND:
            self.operator_bus.subscribe(topic, lambda env: self.link.send(OPERATOR_TO_ROBOT, env))

        agent_cfg = AgentConfig(remote_autonav=cfg.remote_autonav)
        if cfg.scan_samples is not None:
            agent_cfg = AgentConfig(
                remote_autonav=cfg.remote_autonav, scan=ScanConfig(sample_count=cfg.scan_samples)
            )
        self.agent = RobotAgent(
            cfg.world,
            self.robot_bus,
            self.sched,
            config=agent_cfg,
            noise=cfg.noise,
            scan_rng=scan_rng,
            odom_rng=odom_rng,
            initial_map=cfg.initial_map,
            trace=trace,
        )
        self.server = OperatorServer(
            self.operator_bus,
            self.sched,
            config=OperatorConfig(v_pred=cfg.v_pred, smoothing_t=cfg.smoothing_t),
            trace=trace,
            on_frame=None if on_frame is None else self._wrap_frames(on_frame),
        )
        self._schedule_script()

    def _wrap_frames(self, on_frame: Callable[[dict], None]) -> Callable[[dict], None]:
        """Frames to the UI carry a running metrics summary; with
        debug_truth the ground-truth pose rides along for the debug ghost
        layer (the runner owns both endpoints, so it may peek)."""

        def emit(frame: dict) -> None:
            frame["metrics"] = {
                "mode_switches": len(self.agent.transitions),
                "collisions": self.agent.collision_count,
                "teleports": list(self.server.twin.teleports),
                "time_to_goal": self.agent.time_to_goal,
            }
            if self.debug_truth:
                frame["truth"] = self.agent.state.pose.as_dict()
            on_frame(frame)

        return emit

    def _schedule_script(self) -> None:
        for ev in self.cfg.script:
            if ev.kind == "teleop":
                v = float(ev.args.get("v", 0.0))
                w = float(ev.args.get("w", 0.0))
                self.sched.at(ev.t, lambda t, v=v, w=w: self.server.set_teleop(v, w))
            elif ev.kind == "goal":
                x = float(ev.args["x"])
                y = float(ev.args["y"])
                theta = float(ev.args.get("theta", 0.0))
                self.sched.at(ev.t, lambda t, x=x, y=y, th=theta: self.server.send_goal(x, y, th))
            elif ev.kind == "force_outage":
                on = bool(ev.args.get("on", True))
                self.sched.at(ev.t, lambda t, on=on: self.link.force_outage(on))

    def start(self) -> None:
        self.agent.start()
        self.server.start()

    def run_headless(self) -> None:
        self.start()
        self.sched.run_until(self.cfg.duration)

    def metrics(self) -> RunMetrics:
        agent = self.agent
        goal = agent.mode_state.last_goal
        final_dist = None
        if goal is not None:
            final_dist = agent.state.pose.distance_to(goal.pose)
        return RunMetrics(
            scenario=self.cfg.name,
            duration=self.cfg.duration,
            seed=self.cfg.seed,
            time_to_goal=agent.time_to_goal,
            goal_reached=agent.time_to_goal is not None,
            final_distance_to_goal=final_dist,
            path_length=agent.path_length,
            mode_switches=len(agent.transitions),
            transitions=[
                {"t": tr.stamp, "from": tr.from_mode.value, "to": tr.to_mode.value, "reason": tr.reason}
                for tr in agent.transitions
            ],
            teleports=list(self.server.twin.teleports),
            collision_count=agent.collision_count,
            link={
                "sent": dict(self.link.stats.sent),
                "delivered": dict(self.link.stats.delivered),
                "dropped": dict(self.link.stats.dropped),
            },
            malformed_envelopes=self.server.malformed_count,
        )

    def trace_lines(self) -> list[str]:
        return [json.dumps(ev, sort_keys=True, separators=(",", ":")) for ev in self.trace_events]


def run_scenario(
    cfg: ScenarioConfig,
    headless: bool = True,
    on_frame: Callable[[dict], None] | None = None,
    metrics_path: str | Path | None = None,
    trace_path: str | Path | None = None,
) -> RunMetrics:
    """Run a scenario to completion and return (optionally persist) metrics.

    Headless mode drives the virtual clock as fast as possible. Interactive
    pacing lives in the CLI, which runs the same Simulation against the wall
    clock with a gateway attached.
    """
    if not headless:
        raise ValueError("interactive runs are driven by the CLI gateway loop")
    sim = Simulation(cfg, on_frame=on_frame)
    sim.run_headless()
    metrics = sim.metrics()
    if metrics_path is not None:
        Path(metrics_path).write_text(metrics.to_json())
    if trace_path is not None:
        Path(trace_path).write_text("\n".join(sim.trace_lines()) + "\n")
    return metrics
