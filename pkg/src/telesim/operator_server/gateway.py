"""WebSocket gateway: pushes state frames to UI sessions, accepts inputs.

The simulation thread calls broadcast() and poll_inputs(); an asyncio loop
on a background thread owns the sockets. A joining session first receives
a full snapshot (merged from everything seen so far), then delta frames.
Sessions that cannot keep up lose frames rather than stalling the
simulation; a session that lost a frame carrying map or plan state is
resynced with a fresh snapshot on the next broadcast.
"""

from __future__ import annotations

import asyncio
import json
import queue
import threading
from typing import Any

from websockets.asyncio.server import serve

SESSION_QUEUE_DEPTH = 16

INPUT_TYPES = ("teleop", "goal", "link")


class _Session:
    def __init__(self, loop: asyncio.AbstractEventLoop):
        self.queue: asyncio.Queue[str] = asyncio.Queue(maxsize=SESSION_QUEUE_DEPTH)
        self.loop = loop
        self.needs_snapshot = True
        self.lost_state = False


class Gateway:
    def __init__(self, host: str = "127.0.0.1", port: int = 8765):
        self.host = host
        self._requested_port = port
        self.port: int | None = None
        self._inputs: queue.Queue[dict] = queue.Queue()
        self._sessions: dict[Any, _Session] = {}
        self._state: dict = {}  # merged latest frame fields for snapshots
        self._state_lock = threading.Lock()
        self._started = threading.Event()
        self._loop: asyncio.AbstractEventLoop | None = None
        self._thread = threading.Thread(target=self._run_loop, daemon=True)
        self._stop: asyncio.Future | None = None
        self._thread.start()
        if not self._started.wait(10.0):
            raise RuntimeError("gateway failed to start")

    # -- background event loop -------------------------------------------------

    def _run_loop(self) -> None:
        asyncio.run(self._serve())

    async def _serve(self) -> None:
        self._loop = asyncio.get_running_loop()
        self._stop = self._loop.create_future()
        async with serve(self._handle_session, self.host, self._requested_port) as server:
            self.port = next(iter(server.sockets)).getsockname()[1]
            self._started.set()
            await self._stop

    async def _handle_session(self, ws) -> None:
        session = _Session(asyncio.get_running_loop())
        with self._state_lock:
            snapshot = {"type": "frame", "full": True, **self._state}
        self._sessions[ws] = session
        try:
            await ws.send(json.dumps(snapshot, sort_keys=True))
            sender = asyncio.create_task(self._send_loop(ws, session))
            try:
                async for raw in ws:
                    self._handle_input(ws, raw)
            finally:
                sender.cancel()
        except Exception:
            pass
        finally:
            self._sessions.pop(ws, None)

    async def _send_loop(self, ws, session: _Session) -> None:
        while True:
            msg = await session.queue.get()
            await ws.send(msg)

    def _handle_input(self, ws, raw: str | bytes) -> None:
        try:
            doc = json.loads(raw)
            kind = doc.get("type")
            if kind not in INPUT_TYPES:
                raise ValueError(f"unknown input type {kind!r}")
            if kind == "teleop":
                doc = {"type": "teleop", "v": float(doc["v"]), "w": float(doc["w"])}
            elif kind == "goal":
                doc = {
                    "type": "goal",
                    "x": float(doc["x"]),
                    "y": float(doc["y"]),
                    "theta": float(doc.get("theta", 0.0)),
                }
            else:
                action = doc.get("action")
                if action not in ("outage_on", "outage_off"):
                    raise ValueError(f"unknown link action {action!r}")
                doc = {"type": "link", "action": action}
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            payload = json.dumps({"type": "error", "reason": str(exc)})
            asyncio.get_running_loop().create_task(ws.send(payload))
            return
        self._inputs.put(doc)

    # -- simulation-thread API ---------------------------------------------------

    def broadcast(self, frame: dict) -> None:
        """Queue a frame to every live session; never blocks the caller."""
        with self._state_lock:
            self._state.update({k: v for k, v in frame.items() if k not in ("type", "full")})
            full = {"type": "frame", "full": True, **self._state}
        msg = json.dumps(frame, sort_keys=True)
        full_msg = json.dumps(full, sort_keys=True)
        carries_state = "map" in frame or "plan" in frame
        for session in list(self._sessions.values()):
            out = full_msg if session.lost_state else msg
            was_resync = session.lost_state

            def enqueue(s=session, m=out, resync=was_resync):
                try:
                    s.queue.put_nowait(m)
                    if resync:
                        s.lost_state = False
                except asyncio.QueueFull:
                    if carries_state:
                        s.lost_state = True

            session.loop.call_soon_threadsafe(enqueue)

    def poll_inputs(self) -> list[dict]:
        """Drain operator inputs accumulated since the last poll."""
        out = []
        while True:
            try:
                out.append(self._inputs.get_nowait())
            except queue.Empty:
                return out

    @property
    def session_count(self) -> int:
        return len(self._sessions)

    def close(self) -> None:
        if self._loop is not None and self._stop is not None:
            def finish():
                if not self._stop.done():
                    self._stop.set_result(None)

            self._loop.call_soon_threadsafe(finish)
        self._thread.join(5.0)
