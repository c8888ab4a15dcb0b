"""Deriving individual agent tasks from a shared task net, and back.

``decompose`` cuts the simplified task along places whose producer and
consumer belong to different agents.  The producing side keeps the token
in a local parameter place and gains an emission transition; the
consuming side gains a reception transition, event-gated on the channel,
that feeds its local copy of the place.  ``compose`` is the inverse used
for checking: it reconnects each emission/reception pair through an
explicit message place, giving an ordinary net whose trace language can
be compared against the original by ``verify_equivalence``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cpn import (
    EMISSION,
    IN,
    OUT,
    RECEPTION,
    WORK,
    Arc,
    EventGuard,
    Net,
    Place,
    Transition,
    explore,
)
from .messaging import REQUEST

MAX_REPORTED_TRACES = 20


class OrphanActor(Exception):
    """Raised when a task transition's actor matches no known agent."""


class UnroutedPlace(Exception):
    """Raised for a place consumed by several agents with no routing rule."""


class DanglingChannel(Exception):
    """Raised when a channel names an emission or reception no task has."""


@dataclass(frozen=True)
class CommPoint:
    """One directed communication seam cut through a place.

    ``action`` is the consuming work procedure, so the receiver knows
    which knowledge procedure the parameters feed.  ``emission`` and
    ``reception`` are the ids of the inserted transitions.
    """

    place: str
    sender: str
    receiver: str
    action: str
    sensor: str = ""
    performative: str = REQUEST
    emission: str = ""
    reception: str = ""

    def __post_init__(self):
        if not self.sensor:
            object.__setattr__(self, "sensor", self.receiver + "S")

    @property
    def channel(self) -> tuple[str, str]:
        return (self.sender, self.receiver)


@dataclass
class ChannelTable:
    points: tuple[CommPoint, ...] = ()

    def pairs(self) -> frozenset:
        out = set()
        for p in self.points:
            out.add((p.sender, p.receiver) if p.sender <= p.receiver
                    else (p.receiver, p.sender))
        return frozenset(out)

    def for_sender(self, agent) -> list[CommPoint]:
        return [p for p in self.points if p.sender == agent]

    def for_receiver(self, agent) -> list[CommPoint]:
        return [p for p in self.points if p.receiver == agent]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


@dataclass
class AgentTask:
    """An agent's individual objective: its slice of the shared net."""

    agent: str
    net: Net


def _seams(net: Net):
    """(place, sender, consumer actor, action) rows for cross-actor places.

    A place whose consumers span two agents needs a routing decision the
    model cannot supply, so it is rejected rather than guessed at.
    """
    rows = []
    for p in net.places:
        producer_actors = []
        for tid in net.producers(p.id):
            actor = net.transition(tid).actor
            if actor not in producer_actors:
                producer_actors.append(actor)
        consumer_actors = []
        for tid in net.consumers(p.id):
            actor = net.transition(tid).actor
            if actor not in consumer_actors:
                consumer_actors.append(actor)
        if len(consumer_actors) > 1:
            raise UnroutedPlace(
                "place %r is consumed by agents %s; routing is not declared"
                % (p.id, ", ".join(sorted(consumer_actors))))
        if not consumer_actors:
            continue
        consumer = consumer_actors[0]
        action = net.transition(net.consumers(p.id)[0]).procedure
        for sender in producer_actors:
            if sender != consumer:
                rows.append((p.id, sender, consumer, action))
    return rows


def _owner_map(net: Net, seams):
    """Place id -> owning agent (receiver side for cross places)."""
    cross_receivers = {}
    for place, _, receiver, _ in seams:
        cross_receivers[place] = receiver
    owners = {}
    for p in net.places:
        if p.id in cross_receivers:
            owners[p.id] = cross_receivers[p.id]
            continue
        incident = net.producers(p.id) + net.consumers(p.id)
        if incident:
            consumers = net.consumers(p.id)
            tid = consumers[0] if consumers else incident[0]
            owners[p.id] = net.transition(tid).actor
    return owners


def _qualified_names(seams):
    """Emission and reception ids per seam, unique within each task.

    The base names are the receiver's sensor and its emitting action:
    ``<receiver>S`` and ``<receiver>S.AE``.  Ids are extended with the
    place, then the sender, only as far as needed to stay unique in the
    net that holds them (the receiver's for receptions, the sender's for
    emissions).
    """
    def assign(owner_of, base_of):
        names = {}
        by_base = {}
        for seam in seams:
            by_base.setdefault((owner_of(seam), base_of(seam)), []).append(seam)
        for (_, base), members in by_base.items():
            if len(members) == 1:
                names[members[0]] = base
                continue
            by_place = {}
            for seam in members:
                by_place.setdefault("%s.%s" % (base, seam[0]), []).append(seam)
            for name, group in by_place.items():
                if len(group) == 1:
                    names[group[0]] = name
                else:
                    for seam in group:
                        names[seam] = "%s.%s" % (name, seam[1])
        return names

    receptions = assign(lambda s: s[2], lambda s: s[2] + "S")
    emissions = assign(lambda s: s[1], lambda s: s[2] + "S.AE")
    return emissions, receptions


def decompose(net: Net, agents, performatives=None) -> tuple[list[AgentTask], ChannelTable]:
    """Split a shared task net into one non-autonomous net per agent."""
    agent_ids = [a if isinstance(a, str) else a.id for a in agents]
    for t in net.transitions:
        if t.actor not in agent_ids:
            raise OrphanActor("transition %r actor %r is not an agent"
                              % (t.id, t.actor))
    performatives = performatives or {}

    seams = _seams(net)
    owners = _owner_map(net, seams)
    emission_ids, reception_ids = _qualified_names(seams)
    place_cs = {p.id: p.colorset for p in net.places}

    points = []
    for seam in seams:
        place, sender, receiver, action = seam
        points.append(CommPoint(
            place, sender, receiver, action,
            performative=performatives.get(place, REQUEST),
            emission=emission_ids[seam],
            reception=reception_ids[seam],
        ))
    table = ChannelTable(tuple(points))

    cross = {p.place for p in points}
    out_label = {}
    in_label = {}
    for a in net.arcs:
        if a.place in cross:
            if a.direction == OUT and a.place not in out_label:
                out_label[a.place] = a.label
            if a.direction == IN and a.place not in in_label:
                in_label[a.place] = a.label

    tasks = []
    for agent in agent_ids:
        transitions = [t for t in net.transitions if t.actor == agent]
        tids = {t.id for t in transitions}
        places = []
        for p in net.places:
            owner = owners.get(p.id)
            if owner == agent:
                places.append(p)
            elif owner is None and any(
                    t in tids for t in net.producers(p.id) + net.consumers(p.id)):
                places.append(p)
        arcs = []
        for a in net.arcs:
            if a.transition not in tids:
                continue
            if a.direction == OUT and a.place in cross and owners[a.place] != agent:
                arcs.append(Arc("par_" + a.place, a.transition, OUT, a.label))
            else:
                arcs.append(a)

        for point in table.for_sender(agent):
            par = "par_" + point.place
            if not any(p.id == par for p in places):
                places.append(Place(par, place_cs[point.place]))
            guard = EventGuard(point.sender, point.receiver, point.action)
            transitions.append(Transition(
                point.emission, agent, point.receiver + "S.AE", EMISSION, guard))
            arcs.append(Arc(par, point.emission, IN, out_label[point.place]))
        for point in table.for_receiver(agent):
            guard = EventGuard(point.sender, point.receiver, point.action)
            transitions.append(Transition(
                point.reception, agent, point.sensor, RECEPTION, guard))
            arcs.append(Arc(point.place, point.reception, OUT, in_label[point.place]))

        task_net = Net("%s.%s" % (net.id, agent), net.colorsets,
                       places, transitions, arcs)
        tasks.append(AgentTask(agent, task_net))
    return tasks, table


def compose(tasks, table: ChannelTable, id: str = "composed") -> Net:
    """Union of agent tasks with message places closing each channel.

    The result is autonomous: every reception gains an input arc from
    its message place, so firing is driven by the marking alone.
    """
    colorsets = []
    seen_cs = set()
    places = []
    transitions = []
    arcs = []
    used_places = set()
    used_transitions = set()
    place_rename = {}
    trans_rename = {}

    for task in tasks:
        for cs in task.net.colorsets:
            if cs.name not in seen_cs:
                seen_cs.add(cs.name)
                colorsets.append(cs)
        for p in task.net.places:
            name = p.id
            if name in used_places:
                name = "%s.%s" % (task.agent, name)
            place_rename[(task.agent, p.id)] = name
            used_places.add(name)
            places.append(Place(name, p.colorset, p.initial))
        for t in task.net.transitions:
            name = t.id
            if name in used_transitions:
                name = "%s.%s" % (task.agent, name)
            trans_rename[(task.agent, t.id)] = name
            used_transitions.add(name)
            transitions.append(Transition(name, t.actor, t.procedure, t.kind, t.guard))
        for a in task.net.arcs:
            arcs.append(Arc(place_rename[(task.agent, a.place)],
                            trans_rename[(task.agent, a.transition)],
                            a.direction, a.label))

    by_agent = {task.agent: task for task in tasks}
    for point in table:
        sender = by_agent.get(point.sender)
        receiver = by_agent.get(point.receiver)
        if (sender is None or receiver is None
                or not sender.net.has_transition(point.emission)
                or not receiver.net.has_transition(point.reception)):
            raise DanglingChannel(
                "channel %s->%s over %r has no matching emission/reception"
                % (point.sender, point.receiver, point.place))
        emission = trans_rename[(point.sender, point.emission)]
        reception = trans_rename[(point.receiver, point.reception)]
        msg = "msg_%s_%s_%s" % (point.sender, point.receiver, point.place)
        while msg in used_places:
            msg = msg + "_m"
        used_places.add(msg)
        colorset = receiver.net.place(point.place).colorset
        places.append(Place(msg, colorset))
        e_label = next(a.label for a in sender.net.in_arcs(point.emission))
        r_label = next(a.label for a in receiver.net.out_arcs(point.reception))
        arcs.append(Arc(msg, emission, OUT, e_label))
        arcs.append(Arc(msg, reception, IN, r_label))
    return Net(id, colorsets, places, transitions, arcs)


def project_work(trace) -> tuple:
    """The trace with emissions and receptions erased."""
    return tuple(o for o in trace if o.kind == WORK)


def _trace_key(trace):
    return (len(trace), tuple((o.actor, o.procedure) for o in trace))


@dataclass
class EquivalenceReport:
    """Outcome of comparing work-projected trace languages."""

    equal: bool
    depth: int
    missing: tuple = ()
    extra: tuple = ()
    missing_count: int = 0
    extra_count: int = 0
    blocked_receptions: tuple = ()

    @property
    def counterexample(self):
        """A shortest trace present on one side only, if any."""
        if self.missing:
            return self.missing[0]
        if self.extra:
            return self.extra[0]
        return None


def verify_equivalence(reference: Net, composed: Net, depth: int,
                       state_cap: int = 10 ** 6) -> EquivalenceReport:
    """Compare work behaviours of the shared net and a composed one.

    The composed net is explored deeper by its number of communication
    transitions, enough to realize any work prefix when each transition
    fires at most once per token (the shape derivation produces); traces
    are then projected onto work occurrences and both sides compared as
    sets up to ``depth``.
    """
    comm = sum(1 for t in composed.transitions if t.kind != WORK)
    reference_traces = {
        project_work(tr) for tr in explore(reference, depth, state_cap=state_cap)}
    composed_raw = explore(composed, depth + comm, state_cap=state_cap)
    composed_traces = set()
    for tr in composed_raw:
        p = project_work(tr)
        if len(p) <= depth:
            composed_traces.add(p)

    fired = {(o.channel, o.action)
             for tr in composed_raw for o in tr if o.kind == RECEPTION}
    blocked = tuple(
        (t.id, t.guard.channel, t.guard.action)
        for t in composed.transitions
        if t.kind == RECEPTION and (t.guard.channel, t.guard.action) not in fired)

    missing = sorted(reference_traces - composed_traces, key=_trace_key)
    extra = sorted(composed_traces - reference_traces, key=_trace_key)
    return EquivalenceReport(
        equal=not missing and not extra,
        depth=depth,
        missing=tuple(missing[:MAX_REPORTED_TRACES]),
        extra=tuple(extra[:MAX_REPORTED_TRACES]),
        missing_count=len(missing),
        extra_count=len(extra),
        blocked_receptions=blocked,
    )
