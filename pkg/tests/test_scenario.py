import json

import pytest

from telesim.core import TOPIC_CMD_VEL
from telesim.netlink import LinkConfig
from telesim.operator_server import ScenarioConfig, ScenarioError, Simulation, run_scenario

from .harness import make_scenario, run

SCENARIO_DIR = "scenarios"


def test_reference_scenarios_parse():
    for name in ("outage_midrun", "failover_timing", "mapping_tour"):
        cfg = ScenarioConfig.from_file(f"{SCENARIO_DIR}/{name}.json")
        assert cfg.name == name


def test_missing_keys_rejected(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"schema": 1, "name": "x", "duration": 5}))
    with pytest.raises(ScenarioError, match="world"):
        ScenarioConfig.from_file(p)


def test_bad_schema_rejected(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"schema": 9}))
    with pytest.raises(ScenarioError, match="schema"):
        ScenarioConfig.from_file(p)


def test_bad_link_rejected(tmp_path):
    p = tmp_path / "s.json"
    doc = {
        "schema": 1,
        "name": "x",
        "world": "worlds/corridor_room.json",
        "duration": 5,
        "seed": 1,
        "link": {"loss_prob": 2.0},
    }
    (tmp_path / "worlds").mkdir()
    import shutil

    shutil.copy(f"{SCENARIO_DIR}/worlds/corridor_room.json", tmp_path / "worlds" / "corridor_room.json")
    p.write_text(json.dumps(doc))
    with pytest.raises(ScenarioError, match="link"):
        ScenarioConfig.from_file(p)


def test_unknown_script_type_rejected(tmp_path):
    import shutil

    (tmp_path / "worlds").mkdir()
    shutil.copy(f"{SCENARIO_DIR}/worlds/corridor_room.json", tmp_path / "worlds" / "corridor_room.json")
    doc = {
        "schema": 1,
        "name": "x",
        "world": "worlds/corridor_room.json",
        "duration": 5,
        "seed": 1,
        "script": [{"t": 1.0, "type": "explode"}],
    }
    p = tmp_path / "s.json"
    p.write_text(json.dumps(doc))
    with pytest.raises(ScenarioError):
        ScenarioConfig.from_file(p)


def test_run_scenario_writes_outputs(tmp_path):
    cfg = make_scenario(duration=2.0)
    metrics = run_scenario(cfg, metrics_path=tmp_path / "m.json", trace_path=tmp_path / "t.jsonl")
    doc = json.loads((tmp_path / "m.json").read_text())
    assert doc["scenario"] == "test"
    assert doc["collision_count"] == metrics.collision_count
    lines = (tmp_path / "t.jsonl").read_text().splitlines()
    assert all(json.loads(ln)["ev"] in ("send", "drop", "deliver", "transition", "collision", "reconcile") for ln in lines)


def test_clean_link_no_mode_switches():
    cfg = make_scenario(duration=6.0, link=LinkConfig(loss_prob=0.0), script=[{"t": 1.0, "type": "goal", "x": 4.0, "y": 2.0}])
    sim = run(cfg)
    assert sim.metrics().mode_switches == 0


def test_forced_outage_script_event():
    cfg = make_scenario(
        duration=10.0,
        link=LinkConfig(jitter_std=0.0),
        script=[
            {"t": 1.0, "type": "goal", "x": 4.0, "y": 2.0},
            {"t": 3.0, "type": "force_outage", "on": True},
            {"t": 7.0, "type": "force_outage", "on": False},
        ],
    )
    sim = run(cfg)
    tos = [t.to_mode.value for t in sim.agent.transitions]
    assert tos == ["autonomous", "remote"]


def test_teleop_deadman_single_zero_then_silence():
    cfg = make_scenario(
        duration=4.0,
        link=LinkConfig(jitter_std=0.0),
        script=[{"t": 1.0, "type": "teleop", "v": 0.3, "w": 0.0}, {"t": 2.0, "type": "teleop", "v": 0.0, "w": 0.0}],
    )
    sim = Simulation(cfg)
    cmds = []
    sim.operator_bus.subscribe(TOPIC_CMD_VEL, cmds.append)
    sim.run_headless()
    zeros = [e for e in cmds if e.payload == {"v": 0.0, "w": 0.0}]
    nonzeros = [e for e in cmds if e.payload != {"v": 0.0, "w": 0.0}]
    assert len(zeros) == 1
    assert 18 <= len(nonzeros) <= 21  # ~1 s at 20 Hz


def test_operator_mode_view_inferred_during_outage():
    cfg = make_scenario(
        duration=8.0,
        link=LinkConfig(jitter_std=0.0, outages=((3.0, 20.0),)),
        script=[{"t": 1.0, "type": "goal", "x": 4.0, "y": 2.0}],
    )
    sim = Simulation(cfg)
    sim.start()
    sim.sched.run_until(2.9)
    assert sim.server.current_mode_view() == {"mode": "remote", "assumed": False}
    sim.sched.run_until(7.9)
    view = sim.server.current_mode_view()
    assert view["mode"] == "autonomous"
    assert view["assumed"] is True
    assert not sim.server.link_ok


def test_stale_seq_envelopes_discarded():
    cfg = make_scenario(duration=1.0)
    sim = Simulation(cfg)
    sim.run_headless()
    from telesim.core import Envelope

    server = sim.server
    before = server.twin.state.pose
    stale = Envelope(topic="/odom", seq=0, stamp=0.0, payload={"pose": {"x": 9, "y": 9, "theta": 0}, "twist": {"v": 0, "w": 0}, "stamp": 0.0}, source="robot")
    server._on_envelope(stale)
    assert server.twin.state.pose == before
