"""Society documents on disk: canonical form and positioned complaints.

A society lives in one JSON document: colorsets, the organization with
its roles and task, the agents, and their procedures.  The serializer
emits a canonical byte form, so documents survive a parse/serialize
round trip unchanged and diff cleanly.  The parser keeps line and
column for every value and reports both malformed JSON and semantic
problems at the exact position of the offending text.
"""

from orgweave import parse_spec, serialize_spec
from orgweave.pmo import build_pmo

fixture = build_pmo()
text = serialize_spec(fixture.spec)
print("canonical document: %d bytes, starts with:" % len(text))
print("".join("  " + line + "\n" for line in text.splitlines()[:8]))

result = parse_spec(text)
print("parses cleanly:", result.ok)
print("byte identical after round trip:",
      serialize_spec(result.spec) == text)

# Malformed JSON stops at the first syntax error, with its position.
broken = '{"id": "pmo", "colorsets": [{"name": "Dem" "kind": "atom"}]}'
outcome = parse_spec(broken)
for d in outcome.diagnostics:
    print("syntax: %d:%d %s" % (d.line, d.col, d.message))

# Well-formed JSON with a bad society reports every semantic problem it
# can find, each anchored to the value that caused it.  Here the agent
# claims a role the organization never declared.
semantic = """\
{
  "id": "tiny",
  "colorsets": [{"name": "A"}],
  "organization": {
    "id": "org",
    "roles": [{"id": "R", "model": "RM", "count": "n"}],
    "communication": [],
    "task": {"id": "t", "places": [], "transitions": [], "arcs": []}
  },
  "agents": [{"id": "X", "kind": "software", "roles": ["Ghost"]}]
}
"""
outcome = parse_spec(semantic)
for d in outcome.diagnostics:
    print("%s: %d:%d %s" % (d.category, d.line, d.col, d.message))
