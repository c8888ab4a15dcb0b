"""Derive one task per agent from the shared net, then prove nothing broke.

The organization's task names roles (D, P, W, ...), but the society that
runs it has three agents, and one of them plays three roles at once.
The derivation substitutes agents for roles, merges what one agent can
do alone, and splits the rest into per-agent nets that talk over
message channels.  Composing those nets back together and comparing
trace sets against the original is the safety check.
"""

from orgweave import (
    IN,
    OUT,
    Arc,
    ColorSet,
    Net,
    Place,
    Token,
    Transition,
    compose,
    decompose,
    simplify,
    substitute_roles,
    verify_equivalence,
)
from orgweave.derive import ChannelTable
from orgweave.pmo import build_pmo, global_task

fixture = build_pmo()
attribution = fixture.spec.attribution()
print("role attribution:", attribution)

# Step 1: rewrite role actors into agent actors.  Des, P, and Sup all
# become WP transitions.
substituted = substitute_roles(global_task(), attribution)
print("actors after substitution:",
      sorted({t.actor for t in substituted.transitions}))

# Step 2: structural simplification.  When a role had several replicas,
# the task carries one copy of its transitions per replica; after the
# same agent absorbs them all, the copies merge.  The fixture has one
# replica per role, so it passes through unchanged; a two-replica
# design chain shows the merge.
replicas = Net(
    "replicas",
    colorsets=[ColorSet("Dem", "atom"), ColorSet("S", "atom")],
    places=[
        Place("dem_1", "Dem", (Token("Dem", "d1"),)),
        Place("dem_2", "Dem", (Token("Dem", "d2"),)),
        Place("s_1", "S"),
        Place("s_2", "S"),
    ],
    transitions=[
        Transition("Des_1", "WP", "Des"),
        Transition("Des_2", "WP", "Des"),
    ],
    arcs=[
        Arc("dem_1", "Des_1", IN, "d"),
        Arc("s_1", "Des_1", OUT, "x"),
        Arc("dem_2", "Des_2", IN, "d"),
        Arc("s_2", "Des_2", OUT, "x"),
    ],
)
merged = simplify(replicas)
print("replica chain: %d transitions merge into %d, tokens pool into %r"
      % (len(replicas.transitions), len(merged.transitions),
         [t.value for t in merged.place("dem").initial]))

simplified = simplify(substituted)
print("fixture net unchanged: %d places, %d transitions"
      % (len(simplified.places), len(simplified.transitions)))

# Step 3: split into per-agent tasks plus a channel table.  Every place
# whose producer and consumer are different agents becomes a channel,
# with an emission bolted onto the sender and a reception guarding the
# receiver.
tasks, table = decompose(simplified, ("WP", "PP", "M"))
for task in tasks:
    works = [t.id for t in task.net.transitions if t.kind == "work"]
    comms = [t.id for t in task.net.transitions if t.kind != "work"]
    print("task %-3s work=%s comm=%s" % (task.agent, works, comms))

print()
print("channel table:")
for point in table:
    print("  %s -> %s  place=%-3s action=%-3s emission=%s reception=%s"
          % (point.sender, point.receiver, point.place, point.action,
             point.emission, point.reception))

# Step 4: compose the tasks back over the channels and compare trace
# sets with the simplified net up to a depth that covers full runs.
composed = compose(tasks, table)
report = verify_equivalence(simplified, composed, depth=12)
print()
print("equivalent:", report.equal)
print("checked to depth %d, blocked receptions: %d"
      % (report.depth, len(report.blocked_receptions)))

# Sabotage check: drop one channel and the composed society can no
# longer reproduce the original behavior.  The report carries a
# counterexample trace and names the reception that starved.
dropped = table.points[0]
pruned = ChannelTable(tuple(p for p in table if p is not dropped))
report = verify_equivalence(simplified, compose(tasks, pruned), depth=12)
print()
print("after deleting the %s->%s channel for %r:"
      % (dropped.sender, dropped.receiver, dropped.place))
print("  equivalent:", report.equal)
print("  counterexample:",
      " ; ".join("%s.%s" % (o.actor, o.procedure)
                 for o in report.counterexample))
for tid, channel, action in report.blocked_receptions:
    print("  blocked reception %s: nothing arrives on %s->%s (%s)"
          % (tid, channel[0], channel[1], action))
