"""Newline-delimited JSON protocol over a local TCP socket.

One connection = one session. The per-connection loop interleaves command
handling with transient stepping, so Pause/Reset and edits land at step
boundaries and a long run never blocks the command stream. The listen
address comes from --listen or VOLTA_LISTEN and defaults to loopback only.
"""

from __future__ import annotations

import argparse
import os
import selectors
import socket
import sys
import threading

from .session import (CommandDecodeError, Error, Session, command_from_json,
                      event_to_json)
from .viz import GridConfig

DEFAULT_LISTEN = "127.0.0.1:7333"


def _parse_listen(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"listen address must be host:port, got {value!r}")
    return host, int(port)


def serve_connection(conn: socket.socket, grid: GridConfig = GridConfig()) -> None:
    """Drive one session over an open socket until the peer disconnects."""
    session = Session(grid=grid)
    sel = selectors.DefaultSelector()
    # The socket stays blocking: reads happen only after the selector reports
    # readiness, and blocking sends give natural backpressure on big frames.
    sel.register(conn, selectors.EVENT_READ)
    buffer = b""

    def send(events) -> bool:
        data = "".join(event_to_json(e) + "\n" for e in events).encode()
        try:
            conn.sendall(data)
        except OSError:
            return False
        return True

    try:
        while True:
            timeout = 0.0 if session.transient_active else None
            ready = sel.select(timeout)
            if ready:
                try:
                    chunk = conn.recv(65536)
                except OSError:
                    break
                if not chunk:
                    break
                buffer += chunk
                while b"\n" in buffer:
                    line, buffer = buffer.split(b"\n", 1)
                    if not line.strip():
                        continue
                    try:
                        command = command_from_json(line.decode("utf-8", "replace"))
                    except CommandDecodeError as exc:
                        events = [Error(exc.command_id, "SyntaxError", str(exc))]
                    else:
                        events = session.apply(command)
                    if not send(events):
                        return
            elif session.transient_active:
                if not send(session.step()):
                    return
    finally:
        sel.close()
        conn.close()


def serve(listen: str, grid: GridConfig = GridConfig(),
          ready_callback=None) -> None:
    host, port = _parse_listen(listen)
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as server_sock:
        server_sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        server_sock.bind((host, port))
        server_sock.listen()
        bound = server_sock.getsockname()
        print(f"volta listening on {bound[0]}:{bound[1]}", flush=True)
        if ready_callback is not None:
            ready_callback(bound)
        while True:
            conn, _ = server_sock.accept()
            thread = threading.Thread(target=serve_connection, args=(conn, grid),
                                      daemon=True)
            thread.start()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="volta-server",
                                     description="breadboard simulation protocol server")
    parser.add_argument("--listen", default=os.environ.get("VOLTA_LISTEN", DEFAULT_LISTEN),
                        help="host:port (default %(default)s; env VOLTA_LISTEN)")
    parser.add_argument("--grid", default=None, metavar="NXxNY",
                        help="field sample grid, e.g. 60x20")
    args = parser.parse_args(argv)
    grid = GridConfig()
    if args.grid:
        try:
            nx, ny = (int(p) for p in args.grid.lower().split("x"))
            grid = GridConfig(nx=nx, ny=ny)
        except ValueError:
            parser.error(f"bad --grid {args.grid!r}")
    try:
        serve(args.listen, grid)
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
