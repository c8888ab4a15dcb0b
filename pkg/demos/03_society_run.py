"""Execute the full heterogeneous society and replay the recorded run.

One run mixes three execution styles: WP's work surfaces as requests a
person would answer (scripted here), PP's work calls a registered
function, and M's work drives a line protocol against a simulated
machine.  Every committed occurrence lands in the trace, and the trace
alone is enough to reproduce the run.
"""

from orgweave import replay, run_society
from orgweave.pmo import build_pmo
from orgweave.specio import derive_society, society_from_spec

fixture = build_pmo()
society = society_from_spec(fixture.spec, seed=11)

# Step once: nothing can commit yet, but WP's design work is enabled,
# so it surfaces as a pending request carrying the bound tokens and the
# schema of the expected answer.
society.step()
request = society.pending_requests()[0]
print("surfaced %s: %s.%s  data=%s  wants=%s"
      % (request.id, request.agent, request.procedure, request.data,
         request.result_schema))
print("statuses:", society.statuses())

# run_society answers every surfaced request from the script and steps
# until the society goes quiescent.
run_society(society, fixture.answers)
print()
print("trace (%d occurrences):" % len(society.trace))
for event in society.trace:
    if event.kind == "work":
        line = "%s runs %s -> %s" % (
            event.agent, event.procedure,
            {label: token.value for label, token in event.outputs})
    elif event.kind == "emission":
        line = "%s tells %s to %s" % (event.channel[0], event.channel[1],
                                      event.action)
    else:
        line = "%s hears from %s and may %s" % (event.channel[1],
                                                event.channel[0], event.action)
    print("  %2d  %s" % (event.seq, line))

print()
print("quiescent:", society.quiescent)
for agent_id, marking in society.markings().items():
    held = {p: [t.value for t in marking.tokens(p)]
            for p in marking.places() if marking.tokens(p)}
    print("  %-3s final marking: %s" % (agent_id, held))

# The machine side effects live in the robot simulator, not the net.
machine = society.robots["M"]
print("  machine bin: %s, waste left: %d"
      % (machine.state.bin, machine.state.waste))

# Replaying re-fires the recorded transitions with the recorded outputs
# against fresh tasks, so the final markings must match.
_, tasks, table = derive_society(fixture.spec)
again = replay(fixture.spec.agents, tasks, table, society.trace)
print()
print("replay reaches the same markings:", again.markings() == society.markings())
