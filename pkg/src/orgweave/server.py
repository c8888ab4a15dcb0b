"""HTTP and socket surface for a running society.

The server owns one society and drives it as far as it will go without
human input.  Humans read their pending requests, answer them, and the
server drains the consequences before responding.  Every observable
change is also published as an event frame {type, payload, seq} with a
strictly increasing sequence number, so a console that missed frames
can refetch from the last number it saw.

All society access happens under one lock; the society itself stays
single-threaded.
"""

from __future__ import annotations

import asyncio
import threading

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect

from .cpn import Token
from .runtime import (
    PENDING,
    AlreadyAnswered,
    SchemaMismatch,
    Society,
    UnknownRequest,
)

REQUEST_FRAME = "request"
TRACE_FRAME = "trace"
ANSWER_FRAME = "answered"


def request_json(req) -> dict:
    return {
        "id": req.id,
        "agent": req.agent,
        "procedure": req.procedure,
        "description": req.description,
        "prompt": req.prompt,
        "data": dict(req.data),
        "result_schema": [[label, colorset] for label, colorset in req.result_schema],
        "state": req.state,
    }


def _token_json(token: Token):
    if isinstance(token.value, tuple):
        return token.record
    return token.value


def event_json(event) -> dict:
    return {
        "seq": event.seq,
        "agent": event.agent,
        "transition": event.transition,
        "procedure": event.procedure,
        "kind": event.kind,
        "channel": list(event.channel) if event.channel else None,
        "action": event.action,
        "outputs": {label: _token_json(token) for label, token in event.outputs},
    }


class SocietyServer:
    """One society behind a lock, with an event log for consoles."""

    def __init__(self, society: Society):
        self.society = society
        self.lock = threading.Lock()
        self.frames = []
        self._seen_trace = 0
        self._seen_requests = set()
        with self.lock:
            self._drain()

    def _push(self, type_, payload):
        self.frames.append({
            "type": type_,
            "payload": payload,
            "seq": len(self.frames) + 1,
        })

    def _collect(self):
        """Publish frames for society changes since the last look."""
        for event in self.society.trace[self._seen_trace:]:
            self._push(TRACE_FRAME, event_json(event))
        self._seen_trace = len(self.society.trace)
        for req in self.society.pending_requests():
            if req.id not in self._seen_requests:
                self._seen_requests.add(req.id)
                self._push(REQUEST_FRAME, request_json(req))

    def _drain(self):
        """Step until only human input can make progress."""
        self._collect()
        while self.society.step():
            self._collect()

    # -- views

    def requests(self) -> list:
        with self.lock:
            return [request_json(r) for r in sorted(
                self.society.pending_requests(),
                key=lambda r: int(r.id.split("-")[1]))]

    def trace(self) -> list:
        with self.lock:
            return [event_json(e) for e in self.society.trace]

    def marking(self) -> dict:
        with self.lock:
            agents = {}
            for control in self.society.agents:
                agents[control.id] = {
                    pid: [_token_json(t) for t in control.marking.tokens(pid)]
                    for pid in sorted(control.marking.places())
                }
            channels = {}
            for channel, queue in sorted(self.society.channels.queues().items()):
                channels["%s->%s" % channel] = [
                    {"performative": m.performative, "action": m.action,
                     "params": [_token_json(p) for p in m.params], "seq": m.seq}
                    for m in queue
                ]
            return {
                "agents": agents,
                "channels": channels,
                "statuses": self.society.statuses(),
                "quiescent": self.society.quiescent,
            }

    def events(self, after: int = 0) -> list:
        with self.lock:
            return [f for f in self.frames if f["seq"] > after]

    def latest_seq(self) -> int:
        with self.lock:
            return len(self.frames)

    # -- answering

    def submit(self, request_id: str, outputs: dict) -> dict:
        with self.lock:
            req = self.society.requests.get(request_id)
            if req is None:
                raise HTTPException(404, "no request %r" % request_id)
            if req.state != PENDING:
                previous = {label: str(token.value)
                            for label, token in req.outputs.items()}
                if previous == {k: str(v) for k, v in outputs.items()}:
                    return {"ok": True, "state": req.state, "already": True}
                raise HTTPException(
                    409, "request %r was already answered differently" % request_id)
            schema = dict(req.result_schema)
            tokens = {}
            for label, value in outputs.items():
                colorset = schema.get(label)
                if colorset is not None and isinstance(value, str):
                    tokens[label] = Token(colorset, value)
                else:
                    tokens[label] = value
            try:
                self.society.submit_result(request_id, tokens)
            except (SchemaMismatch,) as exc:
                raise HTTPException(422, str(exc)) from exc
            except UnknownRequest as exc:
                raise HTTPException(404, str(exc)) from exc
            except AlreadyAnswered as exc:
                raise HTTPException(409, str(exc)) from exc
            self._push(ANSWER_FRAME, request_json(req))
            self._drain()
            return {"ok": True, "state": req.state, "already": False}


def build_app(society: Society) -> FastAPI:
    server = SocietyServer(society)
    app = FastAPI(title="society console backend")
    app.state.server = server

    @app.get("/requests")
    def get_requests():
        return {"requests": server.requests()}

    @app.post("/requests/{request_id}/result")
    def post_result(request_id: str, body: dict):
        outputs = body.get("outputs")
        if not isinstance(outputs, dict):
            raise HTTPException(422, "body must carry an 'outputs' object")
        return server.submit(request_id, outputs)

    @app.get("/trace")
    def get_trace(after: int = 0):
        return {"trace": [e for e in server.trace() if e["seq"] > after]}

    @app.get("/marking")
    def get_marking():
        return server.marking()

    @app.get("/events")
    def get_events(after: int = 0):
        return {"events": server.events(after), "seq": server.latest_seq()}

    @app.websocket("/events")
    async def events_socket(socket: WebSocket, after: int = 0):
        await socket.accept()
        cursor = after
        try:
            while True:
                fresh = server.events(cursor)
                for frame in fresh:
                    await socket.send_json(frame)
                    cursor = frame["seq"]
                await asyncio.sleep(0.05)
        except (WebSocketDisconnect, RuntimeError):
            return

    return app
