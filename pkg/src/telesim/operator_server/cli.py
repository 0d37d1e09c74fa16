"""Command-line entry points: scenario runs and trace replay.

`telesim run --scenario f.json --headless` executes as fast as the virtual
clock allows and writes metrics. Without --headless the same simulation is
paced against the wall clock with the WebSocket gateway attached, so a
browser console can drive the robot; operator inputs from the gateway are
applied between scheduler steps.
"""

from __future__ import annotations

import argparse
import collections
import dataclasses
import functools
import http.server
import json
import sys
import threading
import time
from pathlib import Path

from .gateway import Gateway
from .scenario import ScenarioConfig, ScenarioError, Simulation, run_scenario

TRACE_EVENTS = ("send", "drop", "deliver", "transition", "collision", "reconcile")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="telesim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario")
    run_p.add_argument("--scenario", required=True, help="scenario JSON file")
    run_p.add_argument("--headless", action="store_true", help="run the virtual clock flat out, no UI")
    run_p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run_p.add_argument("--ws-port", type=int, default=8765, help="gateway WebSocket port (interactive)")
    run_p.add_argument("--host", default="127.0.0.1")
    run_p.add_argument("--metrics-out", default=None, help="write the metrics summary JSON here")
    run_p.add_argument("--trace-out", default=None, help="write the JSON-lines event trace here")
    run_p.add_argument("--serve-console", default=None, metavar="DIR", help="serve a built console from DIR over HTTP")
    run_p.add_argument("--console-port", type=int, default=8000)
    run_p.add_argument("--debug-truth", action="store_true", help="include the ground-truth pose in UI frames")

    replay_p = sub.add_parser("replay", help="validate and summarize an event trace")
    replay_p.add_argument("--trace", required=True, help="JSON-lines trace file")

    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_replay(args)


def _cmd_run(args) -> int:
    try:
        cfg = ScenarioConfig.from_file(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)

    if args.headless:
        metrics = run_scenario(cfg, metrics_path=args.metrics_out, trace_path=args.trace_out)
        print(metrics.to_json())
        return 0
    return _run_interactive(cfg, args)


def _run_interactive(cfg: ScenarioConfig, args) -> int:
    gateway = Gateway(host=args.host, port=args.ws_port)
    httpd = None
    if args.serve_console:
        handler = functools.partial(http.server.SimpleHTTPRequestHandler, directory=args.serve_console)
        httpd = http.server.ThreadingHTTPServer((args.host, args.console_port), handler)
        threading.Thread(target=httpd.serve_forever, daemon=True).start()
        print(f"console: http://{args.host}:{args.console_port}/?ws=ws://{args.host}:{gateway.port}")
    print(f"gateway: ws://{args.host}:{gateway.port}  scenario: {cfg.name}  duration: {cfg.duration}s")

    sim = Simulation(cfg, on_frame=gateway.broadcast, debug_truth=args.debug_truth)
    sim.start()
    wall0 = time.monotonic()
    try:
        while sim.sched.now < cfg.duration:
            target = min(time.monotonic() - wall0, cfg.duration)
            if target > sim.sched.now:
                sim.sched.run_until(target)
            for inp in gateway.poll_inputs():
                _apply_input(sim, inp)
            time.sleep(0.005)
    except KeyboardInterrupt:
        print("\ninterrupted")
    finally:
        gateway.close()
        if httpd is not None:
            httpd.shutdown()

    metrics = sim.metrics()
    if args.metrics_out:
        Path(args.metrics_out).write_text(metrics.to_json())
    if args.trace_out:
        Path(args.trace_out).write_text("\n".join(sim.trace_lines()) + "\n")
    print(metrics.to_json())
    return 0


def _apply_input(sim: Simulation, inp: dict) -> None:
    if inp["type"] == "teleop":
        sim.server.set_teleop(inp["v"], inp["w"])
    elif inp["type"] == "goal":
        sim.server.send_goal(inp["x"], inp["y"], inp.get("theta", 0.0))
    elif inp["type"] == "link":
        sim.link.force_outage(inp["action"] == "outage_on")


def _cmd_replay(args) -> int:
    path = Path(args.trace)
    counts: collections.Counter = collections.Counter()
    transitions = []
    reconciles = []
    t_last = -float("inf")
    try:
        for i, line in enumerate(path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            ev = json.loads(line)
            if ev.get("ev") not in TRACE_EVENTS:
                raise ValueError(f"line {i}: unknown event {ev.get('ev')!r}")
            if "t" not in ev:
                raise ValueError(f"line {i}: event missing timestamp")
            if ev["t"] < t_last - 1e-9:
                raise ValueError(f"line {i}: timestamps not monotone")
            t_last = max(t_last, ev["t"])
            counts[ev["ev"]] += 1
            if ev["ev"] == "transition":
                transitions.append(ev)
            elif ev["ev"] == "reconcile":
                reconciles.append(ev)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: invalid trace: {exc}", file=sys.stderr)
        return 2

    print(f"trace: {path}  ({sum(counts.values())} events, {t_last:.2f}s span)")
    for ev in TRACE_EVENTS:
        print(f"  {ev:11s} {counts.get(ev, 0)}")
    if transitions:
        print("transitions:")
        for tr in transitions:
            print(f"  t={tr['t']:.2f}  {tr['from']} -> {tr['to']}  ({tr['reason']})")
    if reconciles:
        print("reconciliations:")
        for rc in reconciles:
            print(f"  t={rc['t']:.2f}  teleport={rc['teleport']:.3f} m")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
