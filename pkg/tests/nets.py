"""Shared builders for the manufacturing-line nets used across tests."""

from orgweave.cpn import ATOM, IN, OUT, Arc, ColorSet, Net, Place, Token, Transition
from orgweave.org import pair

RELATION = frozenset({
    pair("M", "W"), pair("M", "PP"), pair("P", "W"), pair("P", "PP"), pair("D", "P"),
})
ATTRIBUTION = {"D": "WP", "P": "WP", "W": "WP", "PP": "PP", "M": "M"}
AGENTS = ("WP", "PP", "M")


def atom(name):
    return ColorSet(name, ATOM)


def _task(actors):
    return Net(
        "line",
        colorsets=[atom(n) for n in ("Dem", "S", "Pg", "I", "Rm", "Pc", "Wst", "Stock")],
        places=[
            Place("dem", "Dem", (Token("Dem", "d1"),)),
            Place("s", "S"),
            Place("pg", "Pg"),
            Place("i", "I"),
            Place("stock", "Stock", (Token("Stock", "m1"),)),
            Place("rm", "Rm"),
            Place("pc", "Pc"),
            Place("wst", "Wst"),
        ],
        transitions=[
            Transition("Des", actors[0], "Des"),
            Transition("P", actors[1], "P"),
            Transition("G", actors[2], "G"),
            Transition("Sup", actors[3], "Sup"),
            Transition("Ma", actors[4], "Ma"),
            Transition("C", actors[5], "C"),
        ],
        arcs=[
            Arc("dem", "Des", IN, "d"),
            Arc("s", "Des", OUT, "x"),
            Arc("s", "P", IN, "x"),
            Arc("pg", "P", OUT, "y"),
            Arc("pg", "G", IN, "y"),
            Arc("i", "G", OUT, "z"),
            Arc("stock", "Sup", IN, "m"),
            Arc("rm", "Sup", OUT, "r"),
            Arc("i", "Ma", IN, "z"),
            Arc("rm", "Ma", IN, "r"),
            Arc("pc", "Ma", OUT, "p"),
            Arc("wst", "Ma", OUT, "w"),
            Arc("wst", "C", IN, "w"),
        ],
    )


def role_task():
    """The global manufacturing task with roles as actors."""
    return _task(("D", "P", "PP", "W", "M", "M"))


def line_net():
    """The same task after attributing roles to the three agents."""
    return _task(("WP", "WP", "PP", "WP", "M", "M"))


def net_shape(net):
    """Structure of a net as comparable sets."""
    return (
        {(p.id, p.colorset, tuple(sorted(t.sort_key() for t in p.initial))) for p in net.places},
        {(t.id, t.actor, t.procedure, t.kind) for t in net.transitions},
        {(a.place, a.transition, a.direction, a.label) for a in net.arcs},
    )
