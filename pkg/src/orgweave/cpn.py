"""Colored Petri net data model and firing semantics.

Nets here come in two flavours.  Autonomous nets fire on marking alone.
Non-autonomous nets contain reception transitions that are additionally
gated on an external event: the arrival of a matching message at the head
of a channel queue.  A reception transition with no input arcs is a pure
event sink and consults the inbox; once it has been wired to a message
place (see ``derive.compose``) the event is internalized and the net is
autonomous again.

``explore`` is the bounded brute-force oracle used to compare trace
languages of nets.  It enumerates every firing sequence up to a depth,
producing procedure results through a deterministic stub so that only
control flow is observed.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

ATOM = "atom"
RECORD = "record"

WORK = "work"
EMISSION = "emission"
RECEPTION = "reception"

IN = "in"
OUT = "out"

ALL = "all"
DETERMINISTIC = "deterministic"

NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
# element ids may carry dots (derived sensor transitions such as "PPS.AE")
ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")


class NotEnabled(Exception):
    """Raised when firing a transition whose preconditions do not hold."""


class MissingOutput(Exception):
    """Raised when a fire result lacks a token for an output arc label."""


class DepthExceededBudget(Exception):
    """Raised when exploration visits more states than its configured cap."""


@dataclass(frozen=True)
class ColorSet:
    """A token type: an opaque atom or a record of named fields."""

    name: str
    kind: str = ATOM
    fields: tuple[tuple[str, str], ...] = ()  # (field name, text|integer|identifier)


@dataclass(frozen=True)
class Token:
    """A colored value; record values are stored as ordered field pairs."""

    colorset: str
    value: object

    def __post_init__(self):
        if isinstance(self.value, dict):
            object.__setattr__(self, "value", tuple(sorted(self.value.items())))

    @property
    def record(self) -> dict:
        """Record value as a dict (empty for atoms)."""
        if isinstance(self.value, tuple):
            return dict(self.value)
        return {}

    def sort_key(self):
        return (self.colorset, repr(self.value))


@dataclass(frozen=True)
class Place:
    id: str
    colorset: str
    initial: tuple[Token, ...] = ()


@dataclass(frozen=True)
class EventGuard:
    """External-event condition: a message on (sender, receiver) carrying ``action``.

    The sensor name is fixed by convention to the receiver id followed by "S";
    the same sensor name appears on the emitting side as "<receiver>S.AE".
    """

    sender: str
    receiver: str
    action: str
    sensor: str = ""

    def __post_init__(self):
        if not self.sensor:
            object.__setattr__(self, "sensor", self.receiver + "S")

    @property
    def channel(self) -> tuple[str, str]:
        return (self.sender, self.receiver)


@dataclass(frozen=True)
class Transition:
    id: str
    actor: str
    procedure: str
    kind: str = WORK
    guard: EventGuard | None = None


@dataclass(frozen=True)
class Arc:
    place: str
    transition: str
    direction: str
    label: str


@dataclass(frozen=True)
class Occurrence:
    """One transition firing, as recorded in traces."""

    actor: str
    procedure: str
    kind: str = WORK
    channel: tuple[str, str] | None = None
    action: str | None = None

    @property
    def pair(self) -> tuple[str, str]:
        return (self.actor, self.procedure)


@dataclass(frozen=True)
class Violation:
    element: str
    rule: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, element, rule, message):
        self.violations.append(Violation(element, rule, message))

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


class Net:
    """An immutable colored Petri net; build once, then only read.

    Indexes for places, transitions and arc incidence are computed at
    construction.  Derivation steps produce new ``Net`` values instead of
    mutating existing ones.
    """

    def __init__(self, id, colorsets=(), places=(), transitions=(), arcs=()):
        self.id = id
        self.colorsets = tuple(colorsets)
        self.places = tuple(places)
        self.transitions = tuple(transitions)
        self.arcs = tuple(arcs)
        self._colorsets = {c.name: c for c in self.colorsets}
        self._places = {p.id: p for p in self.places}
        self._transitions = {t.id: t for t in self.transitions}
        self._in_arcs = {t.id: [] for t in self.transitions}
        self._out_arcs = {t.id: [] for t in self.transitions}
        self._producers = {p.id: [] for p in self.places}
        self._consumers = {p.id: [] for p in self.places}
        for a in self.arcs:
            if a.transition in self._transitions:
                if a.direction == IN:
                    self._in_arcs[a.transition].append(a)
                elif a.direction == OUT:
                    self._out_arcs[a.transition].append(a)
            if a.place in self._places:
                if a.direction == OUT:
                    self._producers[a.place].append(a.transition)
                elif a.direction == IN:
                    self._consumers[a.place].append(a.transition)

    def colorset(self, name) -> ColorSet:
        return self._colorsets[name]

    def place(self, pid) -> Place:
        return self._places[pid]

    def transition(self, tid) -> Transition:
        return self._transitions[tid]

    def has_place(self, pid) -> bool:
        return pid in self._places

    def has_transition(self, tid) -> bool:
        return tid in self._transitions

    def in_arcs(self, tid) -> list[Arc]:
        return self._in_arcs.get(tid, [])

    def out_arcs(self, tid) -> list[Arc]:
        return self._out_arcs.get(tid, [])

    def producers(self, pid) -> list[str]:
        """Transition ids with an out-arc into the place."""
        return self._producers.get(pid, [])

    def consumers(self, pid) -> list[str]:
        """Transition ids with an in-arc from the place."""
        return self._consumers.get(pid, [])

    def initial_marking(self) -> "Marking":
        return Marking({p.id: tuple(p.initial) for p in self.places})

    def __repr__(self):
        return "Net(%r, %d places, %d transitions)" % (
            self.id, len(self.places), len(self.transitions))


class Marking:
    """Per-place token multisets, kept in insertion (FIFO) order.

    Equality is multiset equality place by place; the FIFO order only
    decides which token a binding picks first.
    """

    def __init__(self, tokens=None):
        self._tokens = {}
        for pid, toks in (tokens or {}).items():
            toks = tuple(toks)
            if toks:
                self._tokens[pid] = toks

    def tokens(self, pid) -> tuple[Token, ...]:
        return self._tokens.get(pid, ())

    def places(self):
        return self._tokens.keys()

    def total(self) -> int:
        return sum(len(v) for v in self._tokens.values())

    def counts(self) -> dict[str, int]:
        return {pid: len(v) for pid, v in self._tokens.items()}

    def updated(self, consumed, produced) -> "Marking":
        """New marking with ``consumed`` (place, token) pairs removed and
        ``produced`` pairs appended; the receiver is left untouched."""
        tokens = {pid: list(v) for pid, v in self._tokens.items()}
        for pid, tok in consumed:
            pool = tokens.get(pid, [])
            try:
                pool.remove(tok)
            except ValueError:
                raise NotEnabled("no %r token in place %r" % (tok.value, pid))
        for pid, tok in produced:
            tokens.setdefault(pid, []).append(tok)
        return Marking(tokens)

    def key(self):
        """Canonical hashable form (order-insensitive per place)."""
        return tuple(sorted(
            (pid, tuple(sorted(t.sort_key() for t in toks)))
            for pid, toks in self._tokens.items() if toks))

    def __eq__(self, other):
        if not isinstance(other, Marking):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        inner = ", ".join("%s:%d" % (pid, len(v)) for pid, v in sorted(self._tokens.items()))
        return "Marking{%s}" % inner


Binding = dict  # arc label -> Token


def conforms(token: Token, cs: ColorSet) -> str | None:
    """None if the token fits the colorset, else a reason string."""
    if token.colorset != cs.name:
        return "token colorset %r, place expects %r" % (token.colorset, cs.name)
    if cs.kind == ATOM:
        if not isinstance(token.value, str):
            return "atom token value must be a string tag"
        return None
    rec = token.record if isinstance(token.value, tuple) else None
    if rec is None:
        return "record token value must be a field mapping"
    declared = dict(cs.fields)
    if set(rec) != set(declared):
        return "record fields %s do not match declared %s" % (sorted(rec), sorted(declared))
    for fname, vkind in cs.fields:
        v = rec[fname]
        if vkind == "integer" and not isinstance(v, int):
            return "field %r must be an integer" % fname
        if vkind == "text" and not isinstance(v, str):
            return "field %r must be text" % fname
        if vkind == "identifier" and not (isinstance(v, str) and NAME_RE.match(v)):
            return "field %r must be an identifier" % fname
    return None


def canonical_token(cs: ColorSet) -> Token:
    """The fixed stand-in token exploration produces for a colorset."""
    if cs.kind == RECORD:
        value = {}
        for fname, vkind in cs.fields:
            value[fname] = 0 if vkind == "integer" else ("x" if vkind == "identifier" else "")
        return Token(cs.name, value)
    return Token(cs.name, cs.name.lower())


def pure_event(net: Net, t: Transition) -> bool:
    """True when the transition waits on a message rather than on tokens.

    Receptions inside an agent task have no input arcs; composition wires
    them to a message place, after which the marking carries the event.
    """
    return t.kind == RECEPTION and t.guard is not None and not net.in_arcs(t.id)


def validate_net(net: Net) -> ValidationReport:
    """Check every structural invariant; violations are data, not errors."""
    report = ValidationReport()
    seen = set()
    for cs in net.colorsets:
        if cs.name in seen:
            report.add(cs.name, "colorset-unique", "duplicate colorset name %r" % cs.name)
        seen.add(cs.name)
        if cs.kind not in (ATOM, RECORD):
            report.add(cs.name, "colorset-kind", "unknown colorset kind %r" % cs.kind)
        fnames = [f for f, _ in cs.fields]
        if len(fnames) != len(set(fnames)):
            report.add(cs.name, "record-fields-unique", "duplicate record field names")
        for fname, vkind in cs.fields:
            if vkind not in ("text", "integer", "identifier"):
                report.add(cs.name, "field-kind", "unknown value kind %r for field %r" % (vkind, fname))

    seen = set()
    for p in net.places:
        if p.id in seen:
            report.add(p.id, "place-unique", "duplicate place id %r" % p.id)
        seen.add(p.id)
        if p.colorset not in net._colorsets:
            report.add(p.id, "place-colorset", "place %r names missing colorset %r" % (p.id, p.colorset))
            continue
        cs = net.colorset(p.colorset)
        for tok in p.initial:
            reason = conforms(tok, cs)
            if reason:
                report.add(p.id, "initial-conforms", "initial token in %r: %s" % (p.id, reason))

    seen = set()
    for t in net.transitions:
        if t.id in seen:
            report.add(t.id, "transition-unique", "duplicate transition id %r" % t.id)
        seen.add(t.id)
        if t.kind not in (WORK, EMISSION, RECEPTION):
            report.add(t.id, "transition-kind", "unknown transition kind %r" % t.kind)
        if t.kind == RECEPTION and t.guard is None:
            report.add(t.id, "reception-guard", "reception transition %r lacks an event guard" % t.id)
        if t.kind == WORK and t.guard is not None:
            report.add(t.id, "work-guard", "work transition %r must not carry an event guard" % t.id)
        if t.guard is not None:
            g = t.guard
            if g.sensor != g.receiver + "S":
                report.add(t.id, "sensor-name", "guard sensor %r must be %r" % (g.sensor, g.receiver + "S"))
            if g.sender == g.receiver:
                report.add(t.id, "channel-endpoints", "guard channel sender equals receiver %r" % g.sender)
        if not net.in_arcs(t.id) and t.guard is None:
            report.add(t.id, "transition-source", "transition %r has no input arc and no guard" % t.id)

    for a in net.arcs:
        where = "%s--%s" % (a.place, a.transition)
        if a.direction not in (IN, OUT):
            report.add(where, "arc-direction", "arc direction must be in or out")
        if a.place not in net._places:
            report.add(where, "arc-place", "arc names missing place %r" % a.place)
        if a.transition not in net._transitions:
            report.add(where, "arc-transition", "arc names missing transition %r" % a.transition)
        if not a.label:
            report.add(where, "arc-label", "arc label must be nonempty")
        elif not NAME_RE.match(a.label):
            report.add(where, "arc-label", "arc label %r is not an identifier" % a.label)

    for t in net.transitions:
        labels = [a.label for a in net.in_arcs(t.id)]
        if len(labels) != len(set(labels)):
            report.add(t.id, "in-labels-distinct", "transition %r repeats an input arc label" % t.id)
    return report


def _queue(inbox, channel):
    if inbox is None:
        return ()
    if hasattr(inbox, "queue"):
        return inbox.queue(channel)
    return inbox.get(channel, ())


def _event_ready(net, t, inbox):
    head = _queue(inbox, t.guard.channel)
    return bool(head) and head[0].action == t.guard.action


def enabled(net: Net, marking: Marking, inbox=None) -> list[tuple[str, Binding]]:
    """Enabled (transition id, binding) pairs in declaration order.

    Bindings are chosen FIFO: the oldest tokens of each input place, in
    arc order.  Arc labels are plain variables, so the FIFO binding is
    the only one that matters for enabledness.
    """
    out = []
    for t in net.transitions:
        binding = {}
        taken = {}
        ok = True
        for a in net.in_arcs(t.id):
            pool = marking.tokens(a.place)
            idx = taken.get(a.place, 0)
            if idx >= len(pool):
                ok = False
                break
            binding[a.label] = pool[idx]
            taken[a.place] = idx + 1
        if not ok:
            continue
        if pure_event(net, t) and not _event_ready(net, t, inbox):
            continue
        out.append((t.id, binding))
    return out


def fire(net: Net, marking: Marking, tid: str, binding: Binding,
         result: dict | None = None, inbox=None) -> Marking:
    """Fire a transition, returning the successor marking.

    Pure with respect to the marking: the input value is never mutated.
    Output labels that also appear as input labels pass their bound token
    through; ``result`` supplies the rest.  For a pure-event reception the
    head message must match the guard; popping it from its queue is the
    caller's job, performed in the same logical step.
    """
    t = net.transition(tid)
    result = result or {}
    in_arcs = net.in_arcs(tid)
    for a in in_arcs:
        if a.label not in binding:
            raise NotEnabled("binding lacks label %r of transition %r" % (a.label, tid))
    if pure_event(net, t) and not _event_ready(net, t, inbox):
        raise NotEnabled("reception %r has no matching message at its channel head" % tid)

    consumed = [(a.place, binding[a.label]) for a in in_arcs]
    produced = []
    for a in net.out_arcs(tid):
        if a.label in result:
            tok = result[a.label]
        elif a.label in binding:
            tok = binding[a.label]
        else:
            raise MissingOutput("no result token for output label %r of %r" % (a.label, tid))
        produced.append((a.place, tok))
    return marking.updated(consumed, produced)


def _occurrence(t: Transition) -> Occurrence:
    if t.guard is not None:
        return Occurrence(t.actor, t.procedure, t.kind, t.guard.channel, t.guard.action)
    return Occurrence(t.actor, t.procedure, t.kind)


def _freeze_inbox(inbox):
    if inbox is None:
        return ()
    if hasattr(inbox, "queues"):
        inbox = inbox.queues()
    return tuple(sorted((k, tuple(v)) for k, v in inbox.items() if v))


def _successors(net, marking, inbox, stub):
    """All (occurrence, marking', inbox') moves from a state."""
    moves = []
    inbox_map = dict(inbox)
    for tid, binding in enabled(net, marking, inbox_map):
        t = net.transition(tid)
        result = {}
        next_inbox = inbox
        if pure_event(net, t):
            chan = t.guard.channel
            queue = inbox_map[chan]
            msg = queue[0]
            params = list(getattr(msg, "params", ()))
            for i, a in enumerate(net.out_arcs(tid)):
                if i < len(params):
                    result[a.label] = params[i]
            next_inbox = tuple(
                (k, v[1:] if k == chan else v) for k, v in inbox if not (k == chan and len(v) == 1))
        for a in net.out_arcs(tid):
            if a.label not in result and a.label not in binding:
                result[a.label] = stub(net, t, a)
        nxt = fire(net, marking, tid, binding, result, inbox_map)
        moves.append((_occurrence(t), nxt, next_inbox))
    return moves


def _default_stub(net, t, arc):
    return canonical_token(net.colorset(net.place(arc.place).colorset))


def explore(net: Net, depth: int, marking: Marking | None = None, mode: str = ALL,
            stub=None, seed=None, inbox=None, state_cap: int = 10 ** 6) -> frozenset:
    """Trace set of the net up to ``depth`` occurrences.

    ``all`` mode returns every firing sequence (prefix-closed set);
    ``deterministic`` returns the single run obtained by taking the first
    enabled transition each step, or a seeded uniform choice when ``seed``
    is given.  Results of procedures come from ``stub`` (default: one
    canonical token per colorset), so only control flow is explored.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if marking is None:
        marking = net.initial_marking()
    stub = stub or _default_stub
    start_inbox = _freeze_inbox(inbox)

    if mode == DETERMINISTIC:
        rng = random.Random(seed) if seed is not None else None
        trace = []
        state = (marking, start_inbox)
        for _ in range(depth):
            moves = _successors(net, state[0], state[1], stub)
            if not moves:
                break
            occ, nxt_m, nxt_i = moves[0] if rng is None else rng.choice(moves)
            trace.append(occ)
            state = (nxt_m, nxt_i)
        return frozenset({tuple(trace)})

    if mode != ALL:
        raise ValueError("unknown scheduler mode %r" % mode)

    seen_states = set()
    memo = {}

    def language(marking, inbox, budget):
        key = (marking.key(), inbox)
        seen_states.add(key)
        if len(seen_states) > state_cap:
            raise DepthExceededBudget("state count exceeded cap of %d" % state_cap)
        mkey = (key, budget)
        hit = memo.get(mkey)
        if hit is not None:
            return hit
        traces = {()}
        if budget > 0:
            for occ, nxt_m, nxt_i in _successors(net, marking, inbox, stub):
                for suffix in language(nxt_m, nxt_i, budget - 1):
                    traces.add((occ,) + suffix)
        result = frozenset(traces)
        memo[mkey] = result
        return result

    return language(marking, start_inbox, depth)
