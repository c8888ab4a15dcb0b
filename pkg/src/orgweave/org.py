"""Organization and multi-agent-system models.

An organization is a structure (roles plus a communication relation)
paired with a global task net whose transition actors are role ids.
Attributing roles to agents turns it into a MAS model: the same net with
agents as actors, simplified by merging transitions that only differed
in a role index, and a set of agent communication links derived from the
role relation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cpn import (
    WORK,
    Arc,
    Net,
    Place,
    Transition,
    ValidationReport,
    validate_net,
)

SOFTWARE = "software"
HUMAN_INTERFACE = "human-interface"
ROBOT_INTERFACE = "robot-interface"
AGENT_KINDS = (SOFTWARE, HUMAN_INTERFACE, ROBOT_INTERFACE)

_INDEX_RE = re.compile(r"_\d+$")


class UnmappedRole(Exception):
    """Raised when an actor has no agent under the given attribution."""


def family(identifier: str) -> str:
    """Identifier with a trailing replica index removed: D_3 -> D."""
    return _INDEX_RE.sub("", identifier)


def pair(a: str, b: str) -> tuple[str, str]:
    """Unordered pair, canonically ordered."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Role:
    """A role family; count may be symbolic ("n") or a small integer."""

    id: str
    model: str = ""
    count: str = "1"


@dataclass(frozen=True)
class AgentSpec:
    id: str
    kind: str
    roles: tuple[str, ...] = ()
    control: str = ""
    description: str = ""


@dataclass
class Organization:
    """Structure and task of an organization as one value."""

    id: str
    description: str = ""
    roles: tuple[Role, ...] = ()
    comm_relation: frozenset = frozenset()
    global_task: Net | None = None

    def role_ids(self):
        return [r.id for r in self.roles]


@dataclass
class MasModel:
    id: str
    organization: str = ""
    agents: tuple[AgentSpec, ...] = ()
    comm_links: frozenset = frozenset()
    mas_task: Net | None = None

    def agent(self, aid) -> AgentSpec:
        for a in self.agents:
            if a.id == aid:
                return a
        raise KeyError(aid)

    def attribution(self) -> dict[str, str]:
        """role id -> agent id, taken from each agent's role list."""
        out = {}
        for a in self.agents:
            for rid in a.roles:
                out[rid] = a.id
        return out


def resolve_actor(actor: str, attribution: dict) -> str:
    """Agent for an actor: exact role id first, then its family id."""
    if actor in attribution:
        return attribution[actor]
    fam = family(actor)
    if fam in attribution:
        return attribution[fam]
    raise UnmappedRole("no agent attributed to role %r" % actor)


def validate_organization(org: Organization) -> ValidationReport:
    report = ValidationReport()
    seen = set()
    for r in org.roles:
        if r.id in seen:
            report.add(r.id, "role-unique", "duplicate role id %r" % r.id)
        seen.add(r.id)
    declared = {r.id for r in org.roles}
    for p in org.comm_relation:
        a, b = tuple(p)[0], tuple(p)[-1]
        for rid in (a, b):
            if family(rid) not in declared:
                report.add("%s-%s" % (a, b), "comm-role",
                           "communication pair names undeclared role %r" % rid)
    if org.global_task is None:
        report.add(org.id, "task-present", "organization has no global task")
        return report
    for v in validate_net(org.global_task):
        report.violations.append(v)
    for t in org.global_task.transitions:
        if family(t.actor) not in declared:
            report.add(t.id, "actor-declared",
                       "transition %r actor %r is not a declared role" % (t.id, t.actor))
        if t.kind != WORK:
            report.add(t.id, "task-kind",
                       "global task transition %r must be a work transition" % t.id)
    return report


def validate_mas(mas: MasModel, org: Organization) -> ValidationReport:
    report = ValidationReport()
    declared = {r.id for r in org.roles}
    seen = set()
    for a in mas.agents:
        if a.id in seen:
            report.add(a.id, "agent-unique", "duplicate agent id %r" % a.id)
        seen.add(a.id)
        if a.kind not in AGENT_KINDS:
            report.add(a.id, "agent-kind", "unknown agent kind %r" % a.kind)
        if not a.roles:
            report.add(a.id, "roles-nonempty", "agent %r is attributed no role" % a.id)
        for rid in a.roles:
            if rid not in declared:
                report.add(a.id, "role-declared",
                           "agent %r references undeclared role %r" % (a.id, rid))
    counts = {}
    for a in mas.agents:
        for rid in a.roles:
            counts[rid] = counts.get(rid, 0) + 1
    for rid in declared:
        if counts.get(rid, 0) == 0:
            report.add(rid, "attribution-total", "role %r is attributed to no agent" % rid)
    for rid, n in counts.items():
        if n > 1:
            report.add(rid, "attribution-disjoint",
                       "role %r is attributed to %d agents" % (rid, n))
    if report.ok:
        expected = derive_comm_links(org.comm_relation, mas.attribution())
        if mas.comm_links and frozenset(mas.comm_links) != expected:
            report.add(mas.id, "links-derived",
                       "declared communication links differ from the derived set")
    return report


def substitute_roles(net: Net, attribution: dict) -> Net:
    """The same net with role actors replaced by their agents."""
    transitions = [
        Transition(t.id, resolve_actor(t.actor, attribution), t.procedure, t.kind, t.guard)
        for t in net.transitions
    ]
    return Net(net.id, net.colorsets, net.places, transitions, net.arcs)


def derive_comm_links(comm_relation, attribution: dict) -> frozenset:
    """Image of the role communication relation under the attribution.

    Pairs collapsing onto a single agent are dropped: an agent holding
    both roles communicates with itself internally, through its own
    marking, not through a channel.
    """
    links = set()
    for p in comm_relation:
        items = tuple(p)
        a = resolve_actor(items[0], attribution)
        b = resolve_actor(items[-1], attribution)
        if a != b:
            links.add(pair(a, b))
    return frozenset(links)


def _label_map(arcs):
    """Canonical label per arc of one transition; collisions keep originals."""
    labels = [a.label for a in arcs]
    canon = [family(x) for x in labels]
    if len(set(canon)) == len(set(labels)):
        return dict(zip(labels, canon))
    return {x: x for x in labels}


def simplify(net: Net) -> Net:
    """Merge transitions that are identical up to a role-replica index.

    Two transitions merge when they share actor and procedure and their
    arc patterns coincide after stripping ``_<digits>`` suffixes from
    place ids and labels.  Place replicas merge only when their whole
    surroundings merge with them; otherwise they stay apart, which in
    turn keeps their transitions apart.  Repeats until nothing changes.
    """
    current = net
    while True:
        merged = _merge_once(current)
        if _same_shape(merged, current):
            return merged
        current = merged


def _same_shape(a: Net, b: Net) -> bool:
    return (len(a.places) == len(b.places)
            and len(a.transitions) == len(b.transitions)
            and len(a.arcs) == len(b.arcs))


def _merge_once(net: Net) -> Net:
    place_cs = {p.id: p.colorset for p in net.places}

    # Place groups start as all replicas of a family with one colorset
    # and are demoted when any member's surroundings disagree.
    groups = {}
    for p in net.places:
        groups.setdefault((family(p.id), p.colorset), []).append(p.id)
    fusable = {key for key, members in groups.items() if len(members) > 1}

    def place_key(pid):
        key = (family(pid), place_cs.get(pid, ""))
        return key[0] if key in fusable else pid

    while True:
        sig_of = {}
        for t in net.transitions:
            arcs = net.in_arcs(t.id) + net.out_arcs(t.id)
            labels = _label_map(arcs)
            sig = (t.actor, t.procedure, t.kind, t.guard, tuple(sorted(
                (a.direction, place_key(a.place), labels[a.label]) for a in arcs)))
            sig_of[t.id] = sig
        tgroups = {}
        for t in net.transitions:
            tgroups.setdefault(sig_of[t.id], []).append(t.id)
        group_size = {tid: len(members)
                      for members in tgroups.values() for tid in members}

        demoted = set()
        for key in fusable:
            members = groups[key]
            shapes = set()
            ok = True
            for pid in members:
                incident = net.producers(pid) + net.consumers(pid)
                if any(group_size[tid] < 2 for tid in incident):
                    ok = False
                    break
                shape = tuple(sorted(
                    (a.direction, sig_of[a.transition], _label_map(
                        net.in_arcs(a.transition) + net.out_arcs(a.transition))[a.label])
                    for a in net.arcs if a.place == pid))
                shapes.add(shape)
            if not ok or len(shapes) > 1:
                demoted.add(key)
        if not demoted:
            break
        fusable -= demoted

    # Build the quotient: one transition per signature group, arcs taken
    # from each group's first member, places renamed through their group.
    place_name = {}
    taken = set()
    for key, members in groups.items():
        if key not in fusable:
            for pid in members:
                place_name[pid] = pid
                taken.add(pid)
    for key, members in groups.items():
        if key in fusable:
            name = key[0]
            if name not in members and name in place_cs:
                name = members[0]
            while name in taken:
                name = name + "_m"
            for pid in members:
                place_name[pid] = name
            taken.add(name)

    tgroups = {}
    order = []
    for t in net.transitions:
        sig = sig_of[t.id]
        if sig not in tgroups:
            tgroups[sig] = []
            order.append(sig)
        tgroups[sig].append(t.id)

    used_t = {t.id for t in net.transitions}
    trans_name = {}
    taken = set()
    for sig in order:
        members = tgroups[sig]
        if len(members) == 1:
            trans_name[members[0]] = members[0]
            taken.add(members[0])
    for sig in order:
        members = tgroups[sig]
        if len(members) == 1:
            continue
        name = family(members[0])
        if (name not in members and name in used_t) or name in taken:
            name = members[0]
        while name in taken:
            name = name + "_m"
        for tid in members:
            trans_name[tid] = name
        taken.add(name)

    places = []
    seen = set()
    for p in net.places:
        name = place_name[p.id]
        if name in seen:
            continue
        seen.add(name)
        initial = []
        for q in net.places:
            if place_name[q.id] == name:
                initial.extend(q.initial)
        places.append(Place(name, p.colorset, tuple(initial)))

    transitions = []
    arcs = []
    seen = set()
    for sig in order:
        rep = net.transition(tgroups[sig][0])
        name = trans_name[rep.id]
        if name in seen:
            continue
        seen.add(name)
        transitions.append(Transition(name, rep.actor, rep.procedure, rep.kind, rep.guard))
        rep_arcs = net.in_arcs(rep.id) + net.out_arcs(rep.id)
        labels = _label_map(rep_arcs)
        for a in rep_arcs:
            arcs.append(Arc(place_name[a.place], name, a.direction, labels[a.label]))

    return Net(net.id, net.colorsets, places, transitions, arcs)


def cross_actor_places(net: Net) -> dict[str, tuple[str, str]]:
    """Places produced by one actor and consumed by a different one.

    Maps place id to the (producer actor, consumer actor) pair; these are
    the seams where communication must be inserted when the net is split
    into individual tasks.
    """
    out = {}
    for p in net.places:
        producers = {net.transition(t).actor for t in net.producers(p.id)}
        consumers = {net.transition(t).actor for t in net.consumers(p.id)}
        if len(producers) == 1 and len(consumers) == 1:
            (src,), (dst,) = producers, consumers
            if src != dst:
                out[p.id] = (src, dst)
    return out
