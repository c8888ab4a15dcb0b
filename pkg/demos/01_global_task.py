"""Build the workshop's shared task net and poke at it by hand.

The global task of the fixture organization is a colored Petri net: a
demand token flows through design, programming, and image generation
while a stock token flows through supply, and the two branches join at
the manufacturing step.  This script walks the structure, fires the
first transitions manually, and writes the net out as a Graphviz file.
"""

from orgweave import Token, emit_dot, enabled, explore, fire
from orgweave.pmo import global_task

net = global_task()

print("net %r" % net.id)
print("  colorsets:", ", ".join(cs.name for cs in net.colorsets))
for place in net.places:
    tokens = ["%s" % t.value for t in place.initial]
    print("  place %-6s : %s %s" % (place.id, place.colorset,
                                    tokens if tokens else ""))
for t in net.transitions:
    ins = [a.place for a in net.in_arcs(t.id)]
    outs = [a.place for a in net.out_arcs(t.id)]
    print("  transition %-4s actor=%-3s %s -> %s" % (t.id, t.actor, ins, outs))

# Only the transitions whose input places hold tokens are enabled.  At
# the start that is Des (the demand is pending) and Sup (stock exists).
marking = net.initial_marking()
print()
print("initially enabled:", [tid for tid, _ in enabled(net, marking)])

# Fire Des by hand.  A work transition consumes its input binding and
# the caller supplies the produced tokens, here the design x.
marking = fire(net, marking, "Des", {"d": Token("Dem", "d1")},
               result={"x": Token("S", "s1")})
print("after Des, s holds:", [t.value for t in marking.tokens("s")])
print("now enabled:", [tid for tid, _ in enabled(net, marking)])

marking = fire(net, marking, "P", {"x": Token("S", "s1")},
               result={"y": Token("Pg", "pg1")})
print("after P, pg holds:", [t.value for t in marking.tokens("pg")])

# The exploration helper enumerates every firing order the net allows,
# making up stub tokens for the outputs.  The two branches interleave
# freely until Ma joins them, so several maximal traces exist.
traces = explore(net, depth=10)
maximal = [t for t in traces
           if not any(len(u) == len(t) + 1 and u[:len(t)] == t for u in traces)]
print()
print("%d firing prefixes, %d maximal orders:" % (len(traces), len(maximal)))
for trace in maximal:
    print("  " + " ; ".join("%s.%s" % (o.actor, o.procedure) for o in trace))

# The DOT export is deterministic, so diagrams can be diffed.
print()
print(emit_dot(net))
