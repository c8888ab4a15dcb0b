"""Simulated manufacturing machine with a line-oriented command protocol.

One command per line, one reply per command.  Replies start with "OK" or
"ERR".  The machine holds at most one loaded image and one batch of raw
material; manufacturing consumes the material, produces a piece id, and
leaves waste behind until cleared.  An in-process adapter and a small
TCP server speak the same protocol.
"""

from __future__ import annotations

import socketserver
import threading
from dataclasses import dataclass, field, replace

LOAD_IMAGE = "LOAD_IMAGE"
FEED = "FEED"
MANUFACTURE = "MANUFACTURE"
CLEAR = "CLEAR"
STATUS = "STATUS"
VERBS = (LOAD_IMAGE, FEED, MANUFACTURE, CLEAR, STATUS)

ERR_NO_IMAGE = "ERR NO_IMAGE"
ERR_NO_MATERIAL = "ERR NO_MATERIAL"
ERR_BAD_ARG = "ERR BAD_ARG"
ERR_BUSY = "ERR BUSY"


@dataclass(frozen=True)
class Command:
    verb: str
    arg: str | None = None


@dataclass(frozen=True)
class RobotState:
    loaded_image: str | None = None
    material: str | None = None
    bin: tuple[str, ...] = ()
    waste: int = 0
    mode: str = "idle"


def parse_command(line: str) -> Command | None:
    """Command for a protocol line, or None when it cannot be one."""
    parts = line.strip().split()
    if not parts or parts[0] not in VERBS:
        return None
    verb = parts[0]
    if verb in (LOAD_IMAGE, FEED):
        if len(parts) != 2:
            return None
        return Command(verb, parts[1])
    if len(parts) != 1:
        return None
    return Command(verb)


def execute(state: RobotState, cmd: Command) -> tuple[RobotState, str]:
    """Apply one command; the reply is a pure function of state and command."""
    if cmd.verb == LOAD_IMAGE:
        if not cmd.arg:
            return state, ERR_BAD_ARG
        return replace(state, loaded_image=cmd.arg), "OK IMAGE %s" % cmd.arg
    if cmd.verb == FEED:
        if not cmd.arg:
            return state, ERR_BAD_ARG
        return replace(state, material=cmd.arg), "OK MATERIAL %s" % cmd.arg
    if cmd.verb == MANUFACTURE:
        if state.loaded_image is None:
            return state, ERR_NO_IMAGE
        if state.material is None:
            return state, ERR_NO_MATERIAL
        piece = "pc%d" % (len(state.bin) + 1)
        nxt = replace(state, material=None, bin=state.bin + (piece,),
                      waste=state.waste + 1)
        return nxt, "OK PIECE %s" % piece
    if cmd.verb == CLEAR:
        return replace(state, waste=0), "OK CLEARED"
    if cmd.verb == STATUS:
        return state, "OK STATUS image=%s material=%s pieces=%d waste=%d" % (
            state.loaded_image or "-", state.material or "-",
            len(state.bin), state.waste)
    return state, ERR_BAD_ARG


class RobotAdapter:
    """In-process machine: feed it protocol lines, read back replies."""

    def __init__(self):
        self.state = RobotState()

    def line(self, text: str) -> str:
        cmd = parse_command(text)
        if cmd is None:
            return ERR_BAD_ARG
        self.state, reply = execute(self.state, cmd)
        return reply

    def run_script(self, lines) -> list[str]:
        """Replies for a whole command script, in order."""
        return [self.line(text) for text in lines]


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        server = self.server
        claimed = server.claim()
        try:
            for raw in self.rfile:
                text = raw.decode("ascii", "replace")
                if not text.strip():
                    continue
                if claimed:
                    reply = server.adapter.line(text)
                else:
                    reply = ERR_BUSY
                self.wfile.write((reply + "\n").encode("ascii"))
        finally:
            if claimed:
                server.release()


class RobotServer(socketserver.ThreadingTCPServer):
    """TCP front for one adapter; a second live connection is answered
    ERR BUSY until the first disconnects."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host="127.0.0.1", port=0):
        super().__init__((host, port), _Handler)
        self.adapter = RobotAdapter()
        self._lock = threading.Lock()
        self._active = False

    @property
    def address(self):
        return self.socket.getsockname()

    def claim(self) -> bool:
        with self._lock:
            if self._active:
                return False
            self._active = True
            return True

    def release(self):
        with self._lock:
            self._active = False

    def start(self):
        thread = threading.Thread(target=self.serve_forever, daemon=True)
        thread.start()
        return thread
