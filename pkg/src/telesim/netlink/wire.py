"""Cross-process transport: newline-delimited JSON envelopes over TCP.

One UTF-8 JSON object per line, {"topic", "seq", "stamp", "payload"}.
The same LossyLink fault injector used in-process wraps this stream by
pointing its deliver callback at a connection's send().
"""

from __future__ import annotations

import json
import socket
import socketserver
import threading
from typing import Callable

from ..core import Envelope


class WireError(ValueError):
    """Envelope line malformed or incomplete."""


def encode_envelope(env: Envelope) -> bytes:
    return (json.dumps(env.as_wire_dict(), sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def decode_envelope(line: bytes | str, source: str = "") -> Envelope:
    if isinstance(line, bytes):
        line = line.decode("utf-8")
    try:
        doc = json.loads(line)
        return Envelope.from_wire_dict(doc, source=source)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise WireError(f"bad envelope line {line!r}: {exc}") from exc


class EnvelopeConnection:
    """Full-duplex NDJSON envelope stream over a connected socket."""

    def __init__(
        self,
        sock: socket.socket,
        on_envelope: Callable[[Envelope], None],
        source: str = "peer",
        autostart: bool = True,
    ):
        self.sock = sock
        self.on_envelope = on_envelope
        self.source = source
        self._send_lock = threading.Lock()
        self._closed = threading.Event()
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        if autostart:
            self._reader.start()

    def start(self) -> None:
        if not self._reader.is_alive():
            self._reader.start()

    def send(self, env: Envelope) -> None:
        data = encode_envelope(env)
        with self._send_lock:
            self.sock.sendall(data)

    def _read_loop(self) -> None:
        buf = b""
        try:
            while not self._closed.is_set():
                chunk = self.sock.recv(65536)
                if not chunk:
                    break
                buf += chunk
                while b"\n" in buf:
                    line, buf = buf.split(b"\n", 1)
                    if line.strip():
                        self.on_envelope(decode_envelope(line, source=self.source))
        except OSError:
            pass
        finally:
            self._closed.set()

    def close(self) -> None:
        self._closed.set()
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self.sock.close()

    def join(self, timeout: float = 1.0) -> None:
        self._reader.join(timeout)


def connect(host: str, port: int, on_envelope: Callable[[Envelope], None], source: str = "server") -> EnvelopeConnection:
    sock = socket.create_connection((host, port))
    sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
    return EnvelopeConnection(sock, on_envelope, source=source)


class EnvelopeServer:
    """Accepts one envelope stream per client; callback per connection."""

    def __init__(self, host: str, port: int, on_connection: Callable[[EnvelopeConnection], Callable[[Envelope], None]]):
        outer = self

        class Handler(socketserver.BaseRequestHandler):
            def handle(self) -> None:
                self.request.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
                holder: dict = {}
                # Reader must not start until the callback is in place.
                conn = EnvelopeConnection(
                    self.request, lambda env: holder["cb"](env), source="client", autostart=False
                )
                holder["cb"] = on_connection(conn)
                outer._connections.append(conn)
                conn.start()
                conn._reader.join()

        self._connections: list[EnvelopeConnection] = []
        self._server = socketserver.ThreadingTCPServer((host, port), Handler, bind_and_activate=True)
        self._server.daemon_threads = True
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def close(self) -> None:
        for conn in self._connections:
            conn.close()
        self._server.shutdown()
        self._server.server_close()
