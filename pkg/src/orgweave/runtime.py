"""Society execution: agent control loops around individual task nets.

A single-threaded scheduler owns every agent's marking and the channel
set.  Each step commits exactly one occurrence society-wide or, when
nothing can commit, surfaces one request toward a human.  Work bodies
are dispatched by agent kind: software callbacks run inline, robot
scripts run against the machine adapter, and human procedures publish a
request and hold until an answer arrives.  Humans never block the rest
of the society.

The trace records every committed occurrence together with the output
tokens it produced, so a run can be replayed into identical final
markings and channels without the original drivers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cpn import (
    EMISSION,
    RECEPTION,
    WORK,
    Marking,
    Occurrence,
    Token,
    conforms,
    enabled,
    fire,
)
from .derive import AgentTask, ChannelTable
from .messaging import REQUEST, ChannelSet, Message
from .org import HUMAN_INTERFACE, ROBOT_INTERFACE, SOFTWARE, AgentSpec
from .robot import RobotAdapter

IDLE = "idle"
READY = "ready"
WAITING_HUMAN = "waiting-human"
WAITING_ROBOT = "waiting-robot"
WAITING_MESSAGE = "waiting-message"
DONE = "done"

PENDING = "pending"
ANSWERED = "answered"
COMMITTED = "committed"


class SignatureMismatch(Exception):
    """Raised when a procedure does not fit any transition of the task."""


class DuplicateName(Exception):
    """Raised when an agent registers two procedures with one name."""


class ProcedureFailure(Exception):
    """Raised when a body fails; the occurrence is not committed."""


class Starvation(Exception):
    """Raised when the step budget runs out before quiescence."""


class UnscriptedRequest(Exception):
    """Raised when scripted answers lack a surfaced procedure."""


class UnknownRequest(Exception):
    """Raised for a request id that was never issued."""


class SchemaMismatch(Exception):
    """Raised when submitted outputs do not fit the result schema."""


class AlreadyAnswered(Exception):
    """Raised when answering a request that is no longer pending."""


@dataclass(frozen=True)
class KnowledgeProcedure:
    """An agent's knowledge for one work transition.

    Exactly one body field applies, by agent kind: ``software`` is a
    callable from input tokens to output tokens, ``script`` holds robot
    command templates, and ``prompt`` describes the job to a human.
    """

    name: str
    description: str = ""
    inputs: tuple = ()
    outputs: tuple = ()
    software: object = None
    script: tuple = ()
    prompt: str = ""


@dataclass
class HumanRequest:
    id: str
    agent: str
    procedure: str
    description: str
    data: dict
    result_schema: tuple
    prompt: str = ""
    state: str = PENDING
    outputs: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TraceEvent:
    """One committed occurrence, with enough detail to replay it."""

    seq: int
    agent: str
    transition: str
    procedure: str
    kind: str
    channel: tuple | None = None
    action: str | None = None
    outputs: tuple = ()

    def occurrence(self) -> Occurrence:
        return Occurrence(self.agent, self.procedure, self.kind,
                          self.channel, self.action)


class AgentControl:
    """One agent's live state: its task net, marking, and knowledge."""

    def __init__(self, spec: AgentSpec, task: AgentTask):
        self.spec = spec
        self.task = task
        self.marking = task.net.initial_marking()
        self.procedures = {}
        self.status = IDLE

    @property
    def id(self):
        return self.spec.id

    def procedure(self, name) -> KnowledgeProcedure | None:
        return self.procedures.get(name)


class Society:
    """All agents of one organization running their individual tasks."""

    def __init__(self, agents, tasks, table: ChannelTable | None = None,
                 seed=None, robots=None, channel_bound=None):
        by_id = {t.agent: t for t in tasks}
        self.agents = []
        for spec in agents:
            if spec.id not in by_id:
                raise KeyError("no task for agent %r" % spec.id)
            self.agents.append(AgentControl(spec, by_id[spec.id]))
        self.table = table or ChannelTable()
        self.channels = ChannelSet(bound=channel_bound)
        self.seed = seed
        self._rng = random.Random(seed) if seed is not None else None
        self.trace = []
        self.requests = {}
        self._request_count = 0
        self._stepped = False
        self.robots = dict(robots or {})
        for control in self.agents:
            if control.spec.kind == ROBOT_INTERFACE and control.id not in self.robots:
                self.robots[control.id] = RobotAdapter()

    # -- knowledge registration

    def register_procedure(self, agent_id, proc: KnowledgeProcedure):
        control = self._control(agent_id)
        if proc.name in control.procedures:
            raise DuplicateName("agent %r already has procedure %r"
                                % (agent_id, proc.name))
        net = control.task.net
        match = None
        for t in net.transitions:
            if t.kind == WORK and t.procedure == proc.name:
                match = t
                break
        if match is None:
            raise SignatureMismatch("agent %r has no work transition for %r"
                                    % (agent_id, proc.name))
        in_labels = sorted(a.label for a in net.in_arcs(match.id))
        out_labels = sorted(a.label for a in net.out_arcs(match.id))
        if proc.inputs and sorted(l for l, _ in proc.inputs) != in_labels:
            raise SignatureMismatch("procedure %r inputs do not match transition %r"
                                    % (proc.name, match.id))
        if proc.outputs and sorted(l for l, _ in proc.outputs) != out_labels:
            raise SignatureMismatch("procedure %r outputs do not match transition %r"
                                    % (proc.name, match.id))
        control.procedures[proc.name] = proc

    def _control(self, agent_id) -> AgentControl:
        for control in self.agents:
            if control.id == agent_id:
                return control
        raise KeyError(agent_id)

    # -- request lifecycle

    def pending_requests(self) -> list[HumanRequest]:
        return [r for r in self.requests.values() if r.state == PENDING]

    def submit_result(self, request_id, outputs):
        req = self.requests.get(request_id)
        if req is None:
            raise UnknownRequest("no request %r" % request_id)
        if req.state != PENDING:
            raise AlreadyAnswered("request %r is %s" % (request_id, req.state))
        outputs = dict(outputs)
        schema = dict(req.result_schema)
        if set(outputs) != set(schema):
            raise SchemaMismatch(
                "expected outputs %s, got %s" % (sorted(schema), sorted(outputs)))
        control = self._control(req.agent)
        net = control.task.net
        for label, token in outputs.items():
            cs = net.colorset(schema[label])
            reason = conforms(token, cs)
            if reason:
                raise SchemaMismatch("output %r: %s" % (label, reason))
        req.outputs = outputs
        req.state = ANSWERED

    def _request_for(self, agent_id, procedure) -> HumanRequest | None:
        for req in self.requests.values():
            if req.agent == agent_id and req.procedure == procedure \
                    and req.state in (PENDING, ANSWERED):
                return req
        return None

    def _surface_request(self, control, tid, binding):
        net = control.task.net
        t = net.transition(tid)
        proc = control.procedure(t.procedure)
        self._request_count += 1
        rid = "req-%d" % self._request_count
        data = {label: str(token.value) for label, token in binding.items()}
        schema = tuple(
            (a.label, net.place(a.place).colorset) for a in net.out_arcs(tid))
        description = proc.description if proc and proc.description else t.procedure
        prompt = proc.prompt if proc else ""
        req = HumanRequest(rid, control.id, t.procedure, description, data, schema,
                           prompt)
        self.requests[rid] = req
        return req

    # -- stepping

    def _committable(self):
        """(control, tid, binding) triples that could commit right now."""
        out = []
        for control in self.agents:
            net = control.task.net
            for tid, binding in enabled(net, control.marking, self.channels):
                t = net.transition(tid)
                if (t.kind == WORK
                        and control.spec.kind == HUMAN_INTERFACE):
                    req = self._request_for(control.id, t.procedure)
                    if req is None or req.state != ANSWERED:
                        continue
                out.append((control, tid, binding))
        return out

    def _surfaceable(self):
        """Human work occurrences enabled on tokens but lacking a request."""
        out = []
        for control in self.agents:
            if control.spec.kind != HUMAN_INTERFACE:
                continue
            net = control.task.net
            for tid, binding in enabled(net, control.marking, self.channels):
                if net.transition(tid).kind != WORK:
                    continue
                if self._request_for(control.id, net.transition(tid).procedure) is None:
                    out.append((control, tid, binding))
        return out

    def step(self) -> bool:
        """Commit one occurrence or surface one request; False when neither."""
        self._stepped = True
        committable = self._committable()
        if committable:
            if self._rng is not None:
                choice = self._rng.choice(committable)
            else:
                choice = committable[0]
            self._commit(*choice)
            return True
        surfaceable = self._surfaceable()
        if surfaceable:
            control, tid, binding = surfaceable[0]
            self._surface_request(control, tid, binding)
            control.status = WAITING_HUMAN
            return True
        return False

    def _commit(self, control, tid, binding):
        net = control.task.net
        t = net.transition(tid)
        if t.kind == WORK:
            outputs = self._run_body(control, t, tid, binding)
        elif t.kind == EMISSION:
            outputs = self._emit(control, t, binding)
        else:
            outputs = self._receive(control, t, tid)
        marking = fire(net, control.marking, tid, binding, dict(outputs),
                       self.channels)
        if t.kind == RECEPTION:
            _, self.channels = self.channels.receive(
                t.guard.receiver, t.guard.action, t.guard.sender)
        control.marking = marking
        self.trace.append(TraceEvent(
            len(self.trace) + 1, control.id, tid, t.procedure, t.kind,
            t.guard.channel if t.guard else None,
            t.guard.action if t.guard else None,
            tuple(outputs.items())))
        control.status = READY

    def _output_schema(self, net, tid):
        return [(a.label, net.place(a.place).colorset) for a in net.out_arcs(tid)]

    def _run_body(self, control, t, tid, binding):
        kind = control.spec.kind
        if kind == HUMAN_INTERFACE:
            req = self._request_for(control.id, t.procedure)
            req.state = COMMITTED
            return dict(req.outputs)
        proc = control.procedure(t.procedure)
        if kind == SOFTWARE:
            if proc is None or proc.software is None:
                raise ProcedureFailure("agent %r has no software body for %r"
                                       % (control.id, t.procedure))
            try:
                result = proc.software(dict(binding))
            except Exception as exc:
                raise ProcedureFailure("procedure %r failed: %s"
                                       % (t.procedure, exc)) from exc
            return dict(result)
        if kind == ROBOT_INTERFACE:
            return self._run_robot(control, t, tid, binding, proc)
        raise ProcedureFailure("agent %r has unknown kind %r" % (control.id, kind))

    def _run_robot(self, control, t, tid, binding, proc):
        if proc is None or not proc.script:
            raise ProcedureFailure("agent %r has no command script for %r"
                                   % (control.id, t.procedure))
        adapter = self.robots[control.id]
        values = {label: str(token.value) for label, token in binding.items()}
        control.status = WAITING_ROBOT
        replies = []
        try:
            for template in proc.script:
                try:
                    line = template.format(**values)
                except KeyError as exc:
                    raise ProcedureFailure("script for %r names unbound label %s"
                                           % (t.procedure, exc)) from exc
                reply = adapter.line(line)
                if reply.startswith("ERR"):
                    raise ProcedureFailure("machine answered %r to %r"
                                           % (reply, line))
                replies.append(reply)
        finally:
            control.status = READY
        return self._robot_outputs(control, t, tid, replies)

    def _robot_outputs(self, control, t, tid, replies):
        """Output tokens from the script's final reply.

        The last reply's value fields fill the output labels in order;
        labels beyond them get synthesized ids, numbered per procedure
        occurrence, for byproducts the protocol does not name.
        """
        net = control.task.net
        schema = self._output_schema(net, tid)
        values = []
        if replies:
            parts = replies[-1].split()
            if len(parts) > 2:
                values = parts[2:]
        prior = sum(1 for e in self.trace
                    if e.agent == control.id and e.procedure == t.procedure)
        outputs = {}
        for k, (label, colorset) in enumerate(schema):
            if k < len(values):
                outputs[label] = Token(colorset, values[k])
            else:
                outputs[label] = Token(colorset, "%s%d" % (colorset.lower(), prior + 1))
        return outputs

    def _emit(self, control, t, binding):
        performative = REQUEST
        for point in self.table:
            if point.channel == t.guard.channel and point.action == t.guard.action:
                performative = point.performative
                break
        params = tuple(binding[a.label]
                       for a in control.task.net.in_arcs(t.id))
        self.channels = self.channels.send(Message(
            t.guard.sender, t.guard.receiver, performative, t.guard.action, params))
        return {}

    def _receive(self, control, t, tid):
        queue = self.channels.queue(t.guard.channel)
        msg = queue[0]
        net = control.task.net
        outputs = {}
        for k, a in enumerate(net.out_arcs(tid)):
            if k < len(msg.params):
                outputs[a.label] = msg.params[k]
        return outputs

    # -- run state

    @property
    def quiescent(self) -> bool:
        return (not self._committable() and not self._surfaceable()
                and not self.pending_requests() and self.channels.empty)

    def status(self, agent_id) -> str:
        control = self._control(agent_id)
        if self.quiescent:
            return DONE
        if any(c is control for c, _, _ in self._committable()):
            return READY
        net = control.task.net
        for tid, _ in enabled(net, control.marking, self.channels):
            if net.transition(tid).kind == WORK \
                    and control.spec.kind == HUMAN_INTERFACE:
                return WAITING_HUMAN
        if not self._stepped:
            return IDLE
        if any(t.kind == RECEPTION for t in net.transitions):
            return WAITING_MESSAGE
        return DONE

    def statuses(self) -> dict:
        return {c.id: self.status(c.id) for c in self.agents}

    def work_trace(self) -> list:
        return [e for e in self.trace if e.kind == WORK]

    def markings(self) -> dict:
        return {c.id: c.marking for c in self.agents}


def run_society(society: Society, answers=None, max_steps: int = 500) -> Society:
    """Step until quiescence, answering surfaced requests from a script.

    ``answers`` maps procedure name to its output tokens; a surfaced
    procedure outside the script raises UnscriptedRequest.  Hitting
    ``max_steps`` before quiescence raises Starvation.
    """
    answers = answers or {}
    for _ in range(max_steps):
        if society.quiescent:
            return society
        society.step()
        for req in society.pending_requests():
            if req.procedure not in answers:
                raise UnscriptedRequest("no scripted answer for %r" % req.procedure)
            society.submit_result(req.id, answers[req.procedure])
    if society.quiescent:
        return society
    raise Starvation("no quiescence after %d steps" % max_steps)


def replay(agents, tasks, table, trace) -> Society:
    """A fresh society driven through a recorded trace.

    Each event fires its transition with the recorded outputs; messages
    are re-sent and re-received the same way.  No procedures, requests,
    or drivers are involved.
    """
    society = Society(agents, tasks, table)
    for event in trace:
        control = society._control(event.agent)
        net = control.task.net
        pairs = [(tid, b) for tid, b in enabled(net, control.marking, society.channels)
                 if tid == event.transition]
        if not pairs:
            raise ProcedureFailure("replay: %r not enabled at event %d"
                                   % (event.transition, event.seq))
        tid, binding = pairs[0]
        t = net.transition(tid)
        if t.kind == EMISSION:
            society._emit(control, t, binding)
            outputs = {}
        elif t.kind == RECEPTION:
            outputs = society._receive(control, t, tid)
        else:
            outputs = dict(event.outputs)
        control.marking = fire(net, control.marking, tid, binding, outputs,
                               society.channels)
        if t.kind == RECEPTION:
            _, society.channels = society.channels.receive(
                t.guard.receiver, t.guard.action, t.guard.sender)
        society.trace.append(event)
    return society
