"""Drive the human console endpoints the way a web client would.

The serve layer wraps a society in a small HTTP API: pending requests
to answer, a trace feed, the live marking, and an event stream with
sequence numbers so a client that missed frames can resume.  This
script runs against the app in process; `orgweave serve` exposes the
same app over a real port.
"""

from fastapi.testclient import TestClient

from orgweave.pmo import build_pmo
from orgweave.server import build_app
from orgweave.specio import society_from_spec

fixture = build_pmo()
society = society_from_spec(fixture.spec, seed=5)
client = TestClient(build_app(society))

# The app drains the society on startup, so every request a person
# could answer right now is already waiting.
pending = client.get("/requests").json()["requests"]
for req in pending:
    print("card %s: %s -- %s" % (req["id"], req["procedure"],
                                 req["description"]))
    print("  prompt: %s" % req["prompt"])
    print("  data %s, wants %s" % (req["data"], req["result_schema"]))

# Answer the design request.  The submit commits the work, the society
# drains again, and the follow-up programming request appears.
answer = {name: {label: token.value for label, token in outputs.items()}
          for name, outputs in fixture.answers.items()}
first = pending[0]["id"]
reply = client.post("/requests/%s/result" % first,
                    json={"outputs": answer["Des"]})
print()
print("submitted Des:", reply.json())
print("now pending:",
      [r["procedure"] for r in client.get("/requests").json()["requests"]])

# Submitting the same answer twice is safe; a different answer is not.
print("same answer again:",
      client.post("/requests/%s/result" % first,
                  json={"outputs": answer["Des"]}).json())
print("conflicting answer:",
      client.post("/requests/%s/result" % first,
                  json={"outputs": {"x": "other"}}).status_code)

# Finish the run through the API.
while True:
    remaining = client.get("/requests").json()["requests"]
    if not remaining:
        break
    for req in remaining:
        client.post("/requests/%s/result" % req["id"],
                    json={"outputs": answer[req["procedure"]]})

marking = client.get("/marking").json()
print()
print("quiescent:", marking["quiescent"])
print("machine holds:", marking["agents"]["M"])
print("statuses:", marking["statuses"])

# The event stream numbers every frame; asking for ?after=N replays
# exactly what a disconnected client missed.
events = client.get("/events", params={"after": 0}).json()["events"]
print()
print("%d frames total; last three:" % len(events))
for frame in events[-3:]:
    print("  seq %d %s" % (frame["seq"], frame["type"]))
trace = client.get("/trace").json()["trace"]
print("work done, in order:",
      [e["procedure"] for e in trace if e["kind"] == "work"])
