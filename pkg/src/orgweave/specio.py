"""Society documents: reading and writing the JSON dialect.

One society file declares the colorsets, the organization with its
global task net, the agents with their role attributions, and the
knowledge procedure bindings per agent.  Derived outputs use two more
document kinds: one file per agent task and one channels file.

Reading returns a result object carrying diagnostics instead of
raising: every complaint names a line and column, syntax and semantic
alike.  Writing is canonical, so parse and serialize invert each other
byte for byte on well-formed documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import jsonpos
from .cpn import (
    ATOM,
    EMISSION,
    IN,
    OUT,
    RECEPTION,
    RECORD,
    WORK,
    Arc,
    ColorSet,
    EventGuard,
    Net,
    Place,
    Token,
    Transition,
    conforms,
)
from .derive import AgentTask, ChannelTable, CommPoint, decompose
from .jsonpos import ARRAY, NUMBER, OBJECT, STRING, JsonSyntaxError, JsonValue
from .messaging import PERFORMATIVES
from .org import (
    AGENT_KINDS,
    SOFTWARE,
    ROBOT_INTERFACE,
    AgentSpec,
    MasModel,
    Organization,
    Role,
    pair,
    resolve_actor,
    simplify,
    substitute_roles,
    validate_mas,
    validate_organization,
)

SYNTAX = "syntax"
SEMANTIC = "semantic"

FIELD_KINDS = ("text", "integer", "identifier")
KINDS = (WORK, EMISSION, RECEPTION)


@dataclass(frozen=True)
class Diagnostic:
    category: str
    line: int
    col: int
    message: str

    def __str__(self):
        return "%d:%d: %s" % (self.line, self.col, self.message)


@dataclass
class ParseResult:
    spec: object = None
    diagnostics: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.spec is not None and not self.diagnostics


@dataclass(frozen=True)
class TemplateSpec:
    """A declarative software body: format the inputs into one output."""

    output: str
    colorset: str
    format: str


@dataclass(frozen=True)
class ProcedureSpec:
    name: str
    description: str = ""
    prompt: str = ""
    script: tuple = ()
    template: TemplateSpec | None = None


@dataclass
class SocietySpec:
    """Everything one society file declares."""

    id: str
    description: str = ""
    colorsets: tuple = ()
    organization: Organization | None = None
    agents: tuple = ()
    procedures: dict = field(default_factory=dict)
    performatives: dict = field(default_factory=dict)

    def attribution(self) -> dict:
        out = {}
        for a in self.agents:
            for rid in a.roles:
                out[rid] = a.id
        return out


# -- reading helpers


class _Walk:
    """Shape checking over a positioned tree, accumulating diagnostics."""

    def __init__(self):
        self.diagnostics = []
        self.index = {}

    def fail(self, node, message, category=SEMANTIC):
        self.diagnostics.append(Diagnostic(category, node.line, node.col, message))

    def obj(self, node, what) -> bool:
        if node.kind != OBJECT:
            self.fail(node, "%s must be an object" % what)
            return False
        return True

    def arr(self, node, what) -> bool:
        if node.kind != ARRAY:
            self.fail(node, "%s must be an array" % what)
            return False
        return True

    def string(self, node, what) -> str | None:
        if node.kind != STRING:
            self.fail(node, "%s must be a string" % what)
            return None
        return node.value

    def req(self, node, key, what) -> JsonValue | None:
        got = node.get(key)
        if got is None:
            self.fail(node, "%s lacks %r" % (what, key))
        return got

    def req_string(self, node, key, what) -> str | None:
        got = self.req(node, key, what)
        if got is None:
            return None
        return self.string(got, "%s %r" % (what, key))

    def opt_string(self, node, key, what, default="") -> str:
        got = node.get(key)
        if got is None:
            return default
        value = self.string(got, "%s %r" % (what, key))
        return default if value is None else value

    def note(self, name, node):
        self.index.setdefault(name, (node.line, node.col))


def _parse_colorsets(walk: _Walk, node) -> tuple:
    out = []
    if not walk.arr(node, "colorsets"):
        return ()
    for item in node.elements:
        if not walk.obj(item, "colorset"):
            continue
        name = walk.req_string(item, "name", "colorset")
        if name is None:
            continue
        walk.note(name, item)
        kind = walk.opt_string(item, "kind", "colorset", ATOM)
        if kind not in (ATOM, RECORD):
            walk.fail(item.get("kind") or item, "colorset kind must be atom or record")
            kind = ATOM
        fields = []
        fnode = item.get("fields")
        if fnode is not None and walk.arr(fnode, "fields"):
            for f in fnode.elements:
                if not walk.obj(f, "field"):
                    continue
                fname = walk.req_string(f, "name", "field")
                fkind = walk.req_string(f, "kind", "field")
                if fname is None or fkind is None:
                    continue
                if fkind not in FIELD_KINDS:
                    walk.fail(f.get("kind"), "field kind must be one of %s"
                              % ", ".join(FIELD_KINDS))
                    continue
                fields.append((fname, fkind))
        out.append(ColorSet(name, kind, tuple(fields)))
    return tuple(out)


def _parse_token(walk: _Walk, node, colorset: ColorSet | None) -> Token | None:
    if colorset is None:
        walk.fail(node, "token has no colorset to check against")
        return None
    if colorset.kind == ATOM:
        value = walk.string(node, "atom token")
        if value is None:
            return None
        return Token(colorset.name, value)
    if not walk.obj(node, "record token"):
        return None
    rec = {}
    for entry in node.entries:
        if entry.value.kind == STRING:
            rec[entry.key] = entry.value.value
        elif entry.value.kind == NUMBER and isinstance(entry.value.value, int):
            rec[entry.key] = entry.value.value
        else:
            walk.fail(entry.value, "record field %r must be a string or integer"
                      % entry.key)
            return None
    token = Token(colorset.name, rec)
    reason = conforms(token, colorset)
    if reason:
        walk.fail(node, reason)
        return None
    return token


def _parse_guard(walk: _Walk, node) -> EventGuard | None:
    if not walk.obj(node, "guard"):
        return None
    sender = walk.req_string(node, "sender", "guard")
    receiver = walk.req_string(node, "receiver", "guard")
    action = walk.req_string(node, "action", "guard")
    if None in (sender, receiver, action):
        return None
    return EventGuard(sender, receiver, action,
                      walk.opt_string(node, "sensor", "guard"))


def _parse_net(walk: _Walk, node, colorsets) -> Net | None:
    if not walk.obj(node, "net"):
        return None
    nid = walk.req_string(node, "id", "net")
    by_name = {c.name: c for c in colorsets}

    places = []
    pnode = node.get("places")
    if pnode is None:
        walk.fail(node, "net lacks 'places'")
    elif walk.arr(pnode, "places"):
        for item in pnode.elements:
            if not walk.obj(item, "place"):
                continue
            pid = walk.req_string(item, "id", "place")
            cs = walk.req_string(item, "colorset", "place")
            if pid is None or cs is None:
                continue
            walk.note(pid, item)
            initial = []
            inode = item.get("initial")
            if inode is not None and walk.arr(inode, "initial marking"):
                for tnode in inode.elements:
                    token = _parse_token(walk, tnode, by_name.get(cs))
                    if token is not None:
                        initial.append(token)
            places.append(Place(pid, cs, tuple(initial)))

    transitions = []
    tnode = node.get("transitions")
    if tnode is None:
        walk.fail(node, "net lacks 'transitions'")
    elif walk.arr(tnode, "transitions"):
        for item in tnode.elements:
            if not walk.obj(item, "transition"):
                continue
            tid = walk.req_string(item, "id", "transition")
            actor = walk.req_string(item, "actor", "transition")
            if tid is None or actor is None:
                continue
            walk.note(tid, item)
            procedure = walk.opt_string(item, "procedure", "transition", tid)
            kind = walk.opt_string(item, "kind", "transition", WORK)
            if kind not in KINDS:
                walk.fail(item.get("kind"), "transition kind must be one of %s"
                          % ", ".join(KINDS))
                kind = WORK
            guard = None
            gnode = item.get("guard")
            if gnode is not None:
                guard = _parse_guard(walk, gnode)
            transitions.append(Transition(tid, actor, procedure, kind, guard))

    arcs = []
    anode = node.get("arcs")
    if anode is None:
        walk.fail(node, "net lacks 'arcs'")
    elif walk.arr(anode, "arcs"):
        for item in anode.elements:
            if not walk.obj(item, "arc"):
                continue
            place = walk.req_string(item, "place", "arc")
            transition = walk.req_string(item, "transition", "arc")
            direction = walk.req_string(item, "direction", "arc")
            label = walk.req_string(item, "label", "arc")
            if None in (place, transition, direction, label):
                continue
            if direction not in (IN, OUT):
                walk.fail(item.get("direction"), "arc direction must be in or out")
                continue
            arcs.append(Arc(place, transition, direction, label))

    if nid is None:
        return None
    return Net(nid, colorsets, places, transitions, arcs)


def _parse_roles(walk: _Walk, node) -> tuple:
    out = []
    if not walk.arr(node, "roles"):
        return ()
    for item in node.elements:
        if not walk.obj(item, "role"):
            continue
        rid = walk.req_string(item, "id", "role")
        if rid is None:
            continue
        walk.note(rid, item)
        out.append(Role(rid,
                        walk.opt_string(item, "model", "role"),
                        walk.opt_string(item, "count", "role", "1")))
    return tuple(out)


def _parse_relation(walk: _Walk, node) -> frozenset:
    pairs = set()
    if not walk.arr(node, "communication"):
        return frozenset()
    for item in node.elements:
        if item.kind != ARRAY or len(item.elements) != 2:
            walk.fail(item, "communication pair must be a two-element array")
            continue
        a = walk.string(item.elements[0], "communication role")
        b = walk.string(item.elements[1], "communication role")
        if a is None or b is None:
            continue
        pairs.add(pair(a, b))
    return frozenset(pairs)


def _parse_organization(walk: _Walk, node, colorsets) -> Organization | None:
    if not walk.obj(node, "organization"):
        return None
    oid = walk.req_string(node, "id", "organization")
    roles_node = walk.req(node, "roles", "organization")
    relation_node = walk.req(node, "communication", "organization")
    task_node = walk.req(node, "task", "organization")
    if None in (oid, roles_node, relation_node, task_node):
        return None
    walk.note(oid, node)
    task = _parse_net(walk, task_node, colorsets)
    return Organization(
        oid,
        walk.opt_string(node, "description", "organization"),
        _parse_roles(walk, roles_node),
        _parse_relation(walk, relation_node),
        task,
    )


def _parse_agents(walk: _Walk, node) -> tuple:
    out = []
    if not walk.arr(node, "agents"):
        return ()
    for item in node.elements:
        if not walk.obj(item, "agent"):
            continue
        aid = walk.req_string(item, "id", "agent")
        kind = walk.req_string(item, "kind", "agent")
        roles_node = walk.req(item, "roles", "agent")
        if None in (aid, kind, roles_node):
            continue
        walk.note(aid, item)
        if kind not in AGENT_KINDS:
            walk.fail(item.get("kind"), "%r is not an agent kind (one of %s)"
                      % (kind, ", ".join(AGENT_KINDS)))
        roles = []
        if walk.arr(roles_node, "agent roles"):
            for r in roles_node.elements:
                rid = walk.string(r, "agent role")
                if rid is not None:
                    roles.append(rid)
        out.append(AgentSpec(aid, kind, tuple(roles),
                             walk.opt_string(item, "control", "agent"),
                             walk.opt_string(item, "description", "agent")))
    return tuple(out)


def _parse_template(walk: _Walk, node) -> TemplateSpec | None:
    if not walk.obj(node, "template"):
        return None
    output = walk.req_string(node, "output", "template")
    colorset = walk.req_string(node, "colorset", "template")
    fmt = walk.req_string(node, "format", "template")
    if None in (output, colorset, fmt):
        return None
    return TemplateSpec(output, colorset, fmt)


def _parse_procedures(walk: _Walk, node) -> dict:
    out = {}
    if not walk.obj(node, "procedures"):
        return {}
    for entry in node.entries:
        decls = []
        if not walk.arr(entry.value, "procedures of %r" % entry.key):
            continue
        for item in entry.value.elements:
            if not walk.obj(item, "procedure"):
                continue
            name = walk.req_string(item, "name", "procedure")
            if name is None:
                continue
            walk.note("%s/%s" % (entry.key, name), item)
            script = []
            snode = item.get("script")
            if snode is not None and walk.arr(snode, "script"):
                for line in snode.elements:
                    text = walk.string(line, "script line")
                    if text is not None:
                        script.append(text)
            template = None
            tnode = item.get("template")
            if tnode is not None:
                template = _parse_template(walk, tnode)
            decls.append(ProcedureSpec(
                name,
                walk.opt_string(item, "description", "procedure"),
                walk.opt_string(item, "prompt", "procedure"),
                tuple(script),
                template,
            ))
        out[entry.key] = tuple(decls)
    return out


def _parse_performatives(walk: _Walk, node) -> dict:
    out = {}
    if not walk.obj(node, "performatives"):
        return {}
    for entry in node.entries:
        value = walk.string(entry.value, "performative")
        if value is None:
            continue
        if value not in PERFORMATIVES:
            walk.fail(entry.value, "performative must be one of %s"
                      % ", ".join(PERFORMATIVES))
            continue
        out[entry.key] = value
    return out


def _check_semantics(walk: _Walk, spec: SocietySpec, root):
    """Cross-checks beyond document shape, positioned via the id index."""

    def place_of(element):
        return walk.index.get(element, (root.line, root.col))

    org = spec.organization
    report = validate_organization(org)
    mas = MasModel(spec.id, org.id, spec.agents)
    for v in validate_mas(mas, org):
        report.add(v.element, v.rule, v.message)
    for v in report:
        line, col = place_of(v.element)
        walk.diagnostics.append(Diagnostic(SEMANTIC, line, col, v.message))
    if not report.ok:
        return

    attribution = spec.attribution()
    procedures_by_agent = {}
    for t in org.global_task.transitions:
        agent = resolve_actor(t.actor, attribution)
        procedures_by_agent.setdefault(agent, set()).add(t.procedure)

    agent_ids = {a.id: a for a in spec.agents}
    for aid, decls in spec.procedures.items():
        if aid not in agent_ids:
            line, col = place_of(aid)
            walk.diagnostics.append(Diagnostic(
                SEMANTIC, line, col,
                "procedures declared for unknown agent %r" % aid))
            continue
        agent = agent_ids[aid]
        seen = set()
        for decl in decls:
            line, col = place_of("%s/%s" % (aid, decl.name))
            if decl.name in seen:
                walk.diagnostics.append(Diagnostic(
                    SEMANTIC, line, col,
                    "agent %r declares procedure %r twice" % (aid, decl.name)))
            seen.add(decl.name)
            if decl.name not in procedures_by_agent.get(aid, set()):
                walk.diagnostics.append(Diagnostic(
                    SEMANTIC, line, col,
                    "agent %r has no task transition for procedure %r"
                    % (aid, decl.name)))
            if agent.kind == ROBOT_INTERFACE and not decl.script:
                walk.diagnostics.append(Diagnostic(
                    SEMANTIC, line, col,
                    "robot procedure %r needs a command script" % decl.name))
            if agent.kind == SOFTWARE and decl.template is None:
                walk.diagnostics.append(Diagnostic(
                    SEMANTIC, line, col,
                    "software procedure %r needs a template" % decl.name))

    place_ids = {p.id for p in org.global_task.places}
    for pid in spec.performatives:
        if pid not in place_ids:
            walk.diagnostics.append(Diagnostic(
                SEMANTIC, root.line, root.col,
                "performative declared for unknown place %r" % pid))


def parse_spec(text: str) -> ParseResult:
    """Read a society document; diagnostics carry line and column."""
    result = ParseResult()
    try:
        root = jsonpos.parse(text)
    except JsonSyntaxError as exc:
        result.diagnostics.append(
            Diagnostic(SYNTAX, exc.line, exc.col, exc.message))
        return result

    walk = _Walk()
    if not walk.obj(root, "society document"):
        result.diagnostics = walk.diagnostics
        return result
    sid = walk.req_string(root, "id", "society document")
    colorsets_node = walk.req(root, "colorsets", "society document")
    org_node = walk.req(root, "organization", "society document")
    agents_node = walk.req(root, "agents", "society document")
    if None in (sid, colorsets_node, org_node, agents_node):
        result.diagnostics = walk.diagnostics
        return result

    colorsets = _parse_colorsets(walk, colorsets_node)
    organization = _parse_organization(walk, org_node, colorsets)
    agents = _parse_agents(walk, agents_node)
    procedures = {}
    pnode = root.get("procedures")
    if pnode is not None:
        procedures = _parse_procedures(walk, pnode)
        for entry in pnode.entries:
            walk.note(entry.key, entry.value)
    performatives = {}
    fnode = root.get("performatives")
    if fnode is not None:
        performatives = _parse_performatives(walk, fnode)

    spec = SocietySpec(sid, walk.opt_string(root, "description", "society document"),
                       colorsets, organization, agents, procedures, performatives)
    if organization is not None and organization.global_task is not None \
            and not walk.diagnostics:
        _check_semantics(walk, spec, root)
    result.diagnostics = walk.diagnostics
    if organization is not None and not result.diagnostics:
        result.spec = spec
    return result


# -- writing


def _token_json(token: Token, colorset: ColorSet | None):
    if isinstance(token.value, tuple):
        rec = token.record
        if colorset is not None:
            return {name: rec[name] for name, _ in colorset.fields}
        return dict(sorted(rec.items()))
    return token.value


def _net_json(net: Net) -> dict:
    by_name = {c.name: c for c in net.colorsets}
    places = []
    for p in net.places:
        item = {"id": p.id, "colorset": p.colorset}
        if p.initial:
            item["initial"] = [_token_json(t, by_name.get(p.colorset))
                               for t in p.initial]
        places.append(item)
    transitions = []
    for t in net.transitions:
        item = {"id": t.id, "actor": t.actor}
        if t.procedure != t.id:
            item["procedure"] = t.procedure
        if t.kind != WORK:
            item["kind"] = t.kind
        if t.guard is not None:
            guard = {"sender": t.guard.sender, "receiver": t.guard.receiver,
                     "action": t.guard.action}
            if t.guard.sensor != t.guard.receiver + "S":
                guard["sensor"] = t.guard.sensor
            item["guard"] = guard
        transitions.append(item)
    arcs = [{"place": a.place, "transition": a.transition,
             "direction": a.direction, "label": a.label} for a in net.arcs]
    return {"id": net.id, "places": places, "transitions": transitions,
            "arcs": arcs}


def _colorsets_json(colorsets) -> list:
    out = []
    for c in colorsets:
        item = {"name": c.name}
        if c.kind != ATOM:
            item["kind"] = c.kind
            item["fields"] = [{"name": n, "kind": k} for n, k in c.fields]
        out.append(item)
    return out


def serialize_spec(spec: SocietySpec) -> str:
    org = spec.organization
    org_json = {"id": org.id}
    if org.description:
        org_json["description"] = org.description
    roles = []
    for r in org.roles:
        item = {"id": r.id}
        if r.model:
            item["model"] = r.model
        if r.count != "1":
            item["count"] = r.count
        roles.append(item)
    org_json["roles"] = roles
    org_json["communication"] = [list(p) for p in sorted(org.comm_relation)]
    org_json["task"] = _net_json(org.global_task)

    agents = []
    for a in spec.agents:
        item = {"id": a.id, "kind": a.kind, "roles": list(a.roles)}
        if a.control:
            item["control"] = a.control
        if a.description:
            item["description"] = a.description
        agents.append(item)

    doc = {"id": spec.id}
    if spec.description:
        doc["description"] = spec.description
    doc["colorsets"] = _colorsets_json(spec.colorsets)
    doc["organization"] = org_json
    doc["agents"] = agents
    if spec.procedures:
        procs = {}
        for aid in sorted(spec.procedures):
            items = []
            for d in spec.procedures[aid]:
                item = {"name": d.name}
                if d.description:
                    item["description"] = d.description
                if d.prompt:
                    item["prompt"] = d.prompt
                if d.script:
                    item["script"] = list(d.script)
                if d.template is not None:
                    item["template"] = {"output": d.template.output,
                                        "colorset": d.template.colorset,
                                        "format": d.template.format}
                items.append(item)
            procs[aid] = items
        doc["procedures"] = procs
    if spec.performatives:
        doc["performatives"] = {k: spec.performatives[k]
                                for k in sorted(spec.performatives)}
    return json.dumps(doc, indent=2) + "\n"


def serialize_task(task: AgentTask, colorsets) -> str:
    doc = {"agent": task.agent,
           "colorsets": _colorsets_json(colorsets),
           "net": _net_json(task.net)}
    return json.dumps(doc, indent=2) + "\n"


def parse_task(text: str) -> tuple[AgentTask | None, list]:
    try:
        root = jsonpos.parse(text)
    except JsonSyntaxError as exc:
        return None, [Diagnostic(SYNTAX, exc.line, exc.col, exc.message)]
    walk = _Walk()
    if not walk.obj(root, "task document"):
        return None, walk.diagnostics
    agent = walk.req_string(root, "agent", "task document")
    colorsets_node = walk.req(root, "colorsets", "task document")
    net_node = walk.req(root, "net", "task document")
    if None in (agent, colorsets_node, net_node):
        return None, walk.diagnostics
    colorsets = _parse_colorsets(walk, colorsets_node)
    net = _parse_net(walk, net_node, colorsets)
    if walk.diagnostics or net is None:
        return None, walk.diagnostics
    return AgentTask(agent, net), []


def serialize_channels(table: ChannelTable, society: str = "") -> str:
    channels = []
    for p in table:
        item = {"place": p.place, "sender": p.sender, "receiver": p.receiver,
                "action": p.action, "sensor": p.sensor,
                "performative": p.performative,
                "emission": p.emission, "reception": p.reception}
        channels.append(item)
    doc = {}
    if society:
        doc["society"] = society
    doc["channels"] = channels
    return json.dumps(doc, indent=2) + "\n"


def parse_channels(text: str) -> tuple[ChannelTable | None, list]:
    try:
        root = jsonpos.parse(text)
    except JsonSyntaxError as exc:
        return None, [Diagnostic(SYNTAX, exc.line, exc.col, exc.message)]
    walk = _Walk()
    if not walk.obj(root, "channels document"):
        return None, walk.diagnostics
    node = walk.req(root, "channels", "channels document")
    if node is None or not walk.arr(node, "channels"):
        return None, walk.diagnostics
    points = []
    for item in node.elements:
        if not walk.obj(item, "channel"):
            continue
        fields = {}
        for key in ("place", "sender", "receiver", "action"):
            fields[key] = walk.req_string(item, key, "channel")
        if None in fields.values():
            continue
        performative = walk.opt_string(item, "performative", "channel", "request")
        if performative not in PERFORMATIVES:
            walk.fail(item.get("performative"), "performative must be one of %s"
                      % ", ".join(PERFORMATIVES))
            continue
        points.append(CommPoint(
            fields["place"], fields["sender"], fields["receiver"], fields["action"],
            walk.opt_string(item, "sensor", "channel"),
            performative,
            walk.opt_string(item, "emission", "channel"),
            walk.opt_string(item, "reception", "channel"),
        ))
    if walk.diagnostics:
        return None, walk.diagnostics
    return ChannelTable(tuple(points)), []


# -- derivation and runtime glue


def typed_answers(spec: SocietySpec, plain: dict) -> dict:
    """Token-typed answer script from {procedure: {label: text}} data."""
    task = spec.organization.global_task
    schemas = {}
    for t in task.transitions:
        schemas[t.procedure] = {
            a.label: task.place(a.place).colorset for a in task.out_arcs(t.id)}
    out = {}
    for name, outputs in plain.items():
        schema = schemas.get(name, {})
        typed = {}
        for label, value in dict(outputs).items():
            cs = schema.get(label)
            typed[label] = Token(cs, value) if cs else value
        out[name] = typed
    return out


def derive_society(spec: SocietySpec):
    """From the declared global task to per-agent tasks and channels.

    Returns (mas task net, agent tasks, channel table).  The mas task is
    the role net after attribution and structural simplification.
    """
    attribution = spec.attribution()
    net = substitute_roles(spec.organization.global_task, attribution)
    net = simplify(net)
    tasks, table = decompose(net, [a.id for a in spec.agents], spec.performatives)
    return net, tasks, table


def _template_body(template: TemplateSpec):
    def body(binding):
        values = {label: str(token.value) for label, token in binding.items()}
        return {template.output: Token(template.colorset,
                                       template.format.format(**values))}
    return body


def knowledge_from_spec(decl: ProcedureSpec, agent: AgentSpec):
    from .runtime import KnowledgeProcedure

    software = None
    if agent.kind == SOFTWARE and decl.template is not None:
        software = _template_body(decl.template)
    return KnowledgeProcedure(
        decl.name, decl.description, software=software,
        script=decl.script, prompt=decl.prompt)


def society_from_spec(spec: SocietySpec, seed=None, robots=None,
                      channel_bound=None):
    """A runnable society wired from the document's declarations."""
    from .runtime import Society

    _, tasks, table = derive_society(spec)
    society = Society(spec.agents, tasks, table, seed=seed, robots=robots,
                      channel_bound=channel_bound)
    for agent in spec.agents:
        for decl in spec.procedures.get(agent.id, ()):
            society.register_procedure(agent.id, knowledge_from_spec(decl, agent))
    return society
