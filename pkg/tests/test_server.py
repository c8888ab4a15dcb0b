"""The console backend: requests over HTTP, event stream, idempotency."""

import pytest
from fastapi.testclient import TestClient

from orgweave.pmo import build_pmo
from orgweave.server import build_app
from orgweave.specio import society_from_spec


@pytest.fixture()
def client():
    fixture = build_pmo()
    society = society_from_spec(fixture.spec)
    with TestClient(build_app(society)) as c:
        yield c


def answers_of(client):
    return {r["procedure"]: r["id"] for r in client.get("/requests").json()["requests"]}


def test_initial_requests_after_first_drain(client):
    requests = client.get("/requests").json()["requests"]
    assert [r["id"] for r in requests] == ["req-1", "req-2"]
    des = requests[0]
    assert des["procedure"] == "Des"
    assert des["description"] == "Design"
    assert "demand" in des["prompt"]
    assert des["agent"] == "WP"
    assert des["data"] == {"d": "d1"}
    assert des["result_schema"] == [["x", "S"]]
    assert des["state"] == "pending"
    assert requests[1]["procedure"] == "Sup"


def test_answer_commits_and_surfaces_the_next_request(client):
    reply = client.post("/requests/req-1/result", json={"outputs": {"x": "s1"}})
    assert reply.status_code == 200
    assert reply.json()["ok"] is True
    procedures = answers_of(client)
    assert set(procedures) == {"Sup", "P"}
    trace = client.get("/trace").json()["trace"]
    assert [e["procedure"] for e in trace] == ["Des"]


def test_full_flow_reaches_quiescence(client):
    client.post("/requests/req-1/result", json={"outputs": {"x": "s1"}})
    pid = answers_of(client)["P"]
    client.post("/requests/%s/result" % pid, json={"outputs": {"y": "pg1"}})
    marking = client.get("/marking").json()
    assert marking["agents"]["M"]["i"] == ["im(pg1)"]
    assert marking["statuses"]["WP"] == "waiting-human"
    assert marking["quiescent"] is False

    sid = answers_of(client)["Sup"]
    client.post("/requests/%s/result" % sid, json={"outputs": {"r": "rm1"}})
    marking = client.get("/marking").json()
    assert marking["quiescent"] is True
    assert marking["agents"]["M"]["pc"] == ["pc1"]
    assert marking["channels"] == {}
    assert set(marking["statuses"].values()) == {"done"}

    trace = client.get("/trace").json()["trace"]
    works = [e["procedure"] for e in trace if e["kind"] == "work"]
    assert works == ["Des", "P", "G", "Sup", "Ma", "C"]
    assert client.get("/requests").json()["requests"] == []


def test_trace_supports_incremental_fetch(client):
    client.post("/requests/req-1/result", json={"outputs": {"x": "s1"}})
    full = client.get("/trace").json()["trace"]
    assert full
    last = full[-1]["seq"]
    assert client.get("/trace", params={"after": last}).json()["trace"] == []
    partial = client.get("/trace", params={"after": last - 1}).json()["trace"]
    assert [e["seq"] for e in partial] == [last]


def test_submit_error_codes(client):
    assert client.post("/requests/req-99/result",
                       json={"outputs": {"x": "s1"}}).status_code == 404
    assert client.post("/requests/req-1/result",
                       json={"outputs": {"q": "s1"}}).status_code == 422
    assert client.post("/requests/req-1/result", json={}).status_code == 422


def test_submit_is_idempotent(client):
    first = client.post("/requests/req-1/result", json={"outputs": {"x": "s1"}})
    assert first.status_code == 200 and first.json()["already"] is False
    again = client.post("/requests/req-1/result", json={"outputs": {"x": "s1"}})
    assert again.status_code == 200 and again.json()["already"] is True
    conflict = client.post("/requests/req-1/result", json={"outputs": {"x": "zz"}})
    assert conflict.status_code == 409
    trace = client.get("/trace").json()["trace"]
    assert [e["procedure"] for e in trace] == ["Des"]


def test_event_frames_resume_from_any_sequence_number(client):
    body = client.get("/events", params={"after": 0}).json()
    frames = body["events"]
    assert [f["seq"] for f in frames] == [1, 2]
    assert [f["type"] for f in frames] == ["request", "request"]
    assert body["seq"] == 2

    client.post("/requests/req-1/result", json={"outputs": {"x": "s1"}})
    body = client.get("/events", params={"after": 2}).json()
    kinds = [f["type"] for f in body["events"]]
    assert kinds[0] == "answered"
    assert "trace" in kinds and "request" in kinds
    seqs = [f["seq"] for f in body["events"]]
    assert seqs == sorted(seqs) and seqs[0] == 3
    assert all(a < b for a, b in zip(seqs, seqs[1:]))


def test_socket_stream_sends_backlog_and_live_frames(client):
    with client.websocket_connect("/events?after=0") as socket:
        first = socket.receive_json()
        second = socket.receive_json()
        assert first["seq"] == 1 and first["type"] == "request"
        assert second["seq"] == 2 and second["payload"]["procedure"] == "Sup"
        client.post("/requests/req-1/result", json={"outputs": {"x": "s1"}})
        third = socket.receive_json()
        assert third["seq"] == 3 and third["type"] == "answered"
        fourth = socket.receive_json()
        assert fourth["type"] == "trace"
        assert fourth["payload"]["procedure"] == "Des"
        assert fourth["payload"]["outputs"] == {"x": "s1"}
