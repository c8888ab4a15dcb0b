"""Graphviz rendering of task nets.

Places draw as ellipses and transitions as boxes: work boxes carry
"actor.procedure", emission boxes carry their channel, and reception
boxes are dashed and carry the sensor name.  Output depends only on the
net's declaration order, byte for byte, so renders diff cleanly.
"""

from __future__ import annotations

from .cpn import EMISSION, IN, RECEPTION, Net


def _quote(text: str) -> str:
    return '"%s"' % text.replace("\\", "\\\\").replace('"', '\\"')


def _label(*parts: str) -> str:
    """A quoted label; multiple parts stack as lines inside the node."""
    escaped = [p.replace("\\", "\\\\").replace('"', '\\"') for p in parts]
    return '"%s"' % "\\n".join(escaped)


def emit_dot(net: Net) -> str:
    lines = []
    lines.append("digraph %s {" % _quote(net.id))
    lines.append("  rankdir=LR;")
    lines.append("  node [fontname=\"Helvetica\"];")
    for p in net.places:
        label = p.id
        if p.initial:
            label = "%s [%d]" % (p.id, len(p.initial))
        lines.append("  %s [shape=ellipse, label=%s];" % (_quote(p.id), _label(label)))
    for t in net.transitions:
        if t.kind == RECEPTION:
            lines.append("  %s [shape=box, style=dashed, label=%s];"
                         % (_quote(t.id), _label(t.procedure)))
        elif t.kind == EMISSION:
            channel = "%s->%s" % (t.guard.sender, t.guard.receiver)
            lines.append("  %s [shape=box, label=%s];"
                         % (_quote(t.id), _label(t.procedure, channel)))
        else:
            lines.append("  %s [shape=box, label=%s];"
                         % (_quote(t.id), _label("%s.%s" % (t.actor, t.procedure))))
    for a in net.arcs:
        if a.direction == IN:
            edge = "%s -> %s" % (_quote(a.place), _quote(a.transition))
        else:
            edge = "%s -> %s" % (_quote(a.transition), _quote(a.place))
        lines.append("  %s [label=%s];" % (edge, _label(a.label)))
    lines.append("}")
    return "\n".join(lines) + "\n"
