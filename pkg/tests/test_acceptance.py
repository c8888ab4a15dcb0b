"""Acceptance gate: one test and one pass line per criterion.

Each criterion is verified end to end with its tolerance pinned in the
test body.  The helpers the criteria need (shared nets, the random net
generator, the naive trace enumerator) come from the test-side modules,
which are written independently of the library internals they check.
"""

import json
import random
import time
from pathlib import Path

import orgweave
from orgweave.cli import main
from orgweave.cpn import ALL, RECEPTION, WORK, explore
from orgweave.derive import ChannelTable, compose, decompose, verify_equivalence
from orgweave.org import derive_comm_links, pair
from orgweave.pmo import build_pmo
from orgweave.runtime import run_society
from orgweave.specio import parse_spec, serialize_spec, society_from_spec
from nets import ATTRIBUTION, RELATION, line_net
from randnets import random_net

FIXTURES = Path(orgweave.__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "data" / "golden"
MALFORMED = Path(__file__).parent / "data" / "malformed"


def report(number, detail):
    print("criterion %d PASS: %s" % (number, detail))


def test_criterion_1_communication_links():
    started = time.monotonic()
    links = derive_comm_links(RELATION, ATTRIBUTION)
    elapsed = time.monotonic() - started
    expected = frozenset({pair("WP", "M"), pair("PP", "M"), pair("WP", "PP")})
    assert links == expected
    assert pair("WP", "WP") not in links
    assert elapsed < 1.0, "link derivation took %.3fs" % elapsed
    report(1, "derived links == {WP-M, PP-M, WP-PP}, self links absent, %.3fs"
           % elapsed)


def test_criterion_2_derivation_equivalence():
    started = time.monotonic()
    net = line_net()
    tasks, table = decompose(net, ("WP", "PP", "M"))
    fixture_report = verify_equivalence(net, compose(tasks, table), depth=12)
    assert fixture_report.equal, fixture_report.counterexample

    checked = 0
    for seed in range(50):
        generated, agents = random_net(seed)
        tasks, table = decompose(generated, agents)
        outcome = verify_equivalence(generated, compose(tasks, table), depth=8)
        assert outcome.equal, (seed, outcome.counterexample)
        assert outcome.missing_count == 0 and outcome.extra_count == 0
        checked += 1
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, "equivalence checks took %.1fs" % elapsed
    report(2, "fixture equal at depth 12; %d/50 generated nets equal, %.1fs"
           % (checked, elapsed))


def test_criterion_3_mutation_sensitivity():
    started = time.monotonic()
    net = line_net()
    tasks, table = decompose(net, ("WP", "PP", "M"))
    broken = 0
    for point in table:
        pruned = ChannelTable(tuple(p for p in table if p is not point))
        outcome = verify_equivalence(net, compose(tasks, pruned), depth=12)
        assert not outcome.equal
        assert outcome.counterexample is not None
        assert any(channel == point.channel and action == point.action
                   for _, channel, action in outcome.blocked_receptions)
        broken += 1
    elapsed = time.monotonic() - started
    assert broken == 3
    assert elapsed < 10.0, "mutation checks took %.1fs" % elapsed
    report(3, "3/3 deleted channels produce counterexamples, %.1fs" % elapsed)


def derived_order(net, depth):
    """Precedence pairs that hold in every maximal work trace."""
    traces = explore(net, depth)
    maximal = [t for t in traces
               if not any(len(u) == len(t) + 1 and u[:len(t)] == t
                          for u in traces)]
    assert maximal
    pairs = None
    for trace in maximal:
        names = [o.procedure for o in trace if o.kind == WORK]
        here = {(a, b) for i, a in enumerate(names) for b in names[i + 1:]}
        pairs = here if pairs is None else pairs & here
    return pairs


def test_criterion_4_end_to_end_run():
    fixture = build_pmo()
    order = derived_order(fixture.spec.organization.global_task, depth=12)
    for before, after in fixture.precedence:
        assert (before, after) in order

    society = society_from_spec(fixture.spec, seed=2026)
    run_society(society, fixture.answers)
    assert society.quiescent
    marking = society.markings()["M"]
    assert len(marking.tokens("pc")) == 1
    assert len(marking.tokens("wst")) == 0
    assert society.robots["M"].state.waste == 0
    works = [e.procedure for e in society.work_trace()]
    assert sorted(works) == sorted({a for p in order for a in p})
    position = {name: works.index(name) for name in works}
    for before, after in order:
        assert position[before] < position[after], (before, after)

    traces = []
    for _ in range(10):
        repeat = society_from_spec(fixture.spec, seed=2026)
        run_society(repeat, fixture.answers)
        traces.append(repeat.trace)
    assert all(t == traces[0] for t in traces)
    report(4, "quiescent with 1 piece and 0 waste; %d-work trace linearizes "
              "the explored order; 10 seeded runs identical" % len(works))


def test_criterion_5_messaging_properties():
    from orgweave.messaging import ChannelSet, Message

    rng = random.Random(99173)
    channels = [("a", "b"), ("c", "b"), ("a", "d"), ("d", "b")]
    for trial in range(1000):
        cs = ChannelSet()
        sent = {c: [] for c in channels}
        received = {c: [] for c in channels}
        for _ in range(rng.randint(2, 10)):
            if rng.random() < 0.6 or not any(cs.queue(c) for c in channels):
                channel = rng.choice(channels)
                msg = Message(channel[0], channel[1], "request",
                              "act%d" % rng.randint(0, 2))
                cs = cs.send(msg)
                sent[channel].append(msg.action)
            else:
                channel = rng.choice([c for c in channels if cs.queue(c)])
                head = cs.queue(channel)[0]
                got, cs = cs.receive(channel[1], head.action, channel[0])
                assert got is not None
                received[channel].append((got.seq, got.action))
        for channel in channels:
            seqs = [s for s, _ in received[channel]]
            assert seqs == sorted(seqs)
            assert len(set(seqs)) == len(seqs)
            assert [a for _, a in received[channel]] == \
                sent[channel][:len(received[channel])]

    fixture = build_pmo()
    for seed in range(1000):
        society = society_from_spec(fixture.spec, seed=seed)
        schedule = random.Random(7000 + seed)
        for _ in range(60):
            if society.quiescent:
                break
            society.step()
            pending = society.pending_requests()
            schedule.shuffle(pending)
            for req in pending:
                society.submit_result(req.id, fixture.answers[req.procedure])
        assert society.quiescent
        balance = {}
        for event in society.trace:
            key = (event.channel, event.action)
            if event.kind == "emission":
                balance[key] = balance.get(key, 0) + 1
            elif event.kind == "reception":
                balance[key] = balance.get(key, 0) - 1
                assert balance[key] >= 0, "reception before its emission"
    report(5, "1000 interleavings FIFO and at-most-once; 1000 society "
              "schedules never receive on an empty channel")


def test_criterion_6_reception_gating_in_exploration():
    net = line_net()
    tasks, table = decompose(net, ("WP", "PP", "M"))
    composed = compose(tasks, table)
    traces = explore(composed, depth=10, mode=ALL)
    assert traces
    checked = 0
    for trace in traces:
        outstanding = {}
        for occurrence in trace:
            key = (occurrence.channel, occurrence.action)
            if occurrence.kind == "emission":
                outstanding[key] = outstanding.get(key, 0) + 1
            elif occurrence.kind == RECEPTION:
                outstanding[key] = outstanding.get(key, 0) - 1
                assert outstanding[key] >= 0, trace
                checked += 1
    assert checked > 0
    report(6, "every reception in %d explored traces follows a matching "
              "emission" % len(traces))


def test_criterion_7_format_round_trip():
    fixture = build_pmo()
    text = serialize_spec(fixture.spec)
    result = parse_spec(text)
    assert result.ok
    assert serialize_spec(result.spec) == text

    for seed in range(20):
        net, agents = random_net(seed + 300)
        doc = {
            "id": "gen%d" % seed,
            "colorsets": [{"name": c.name} for c in net.colorsets],
            "organization": {
                "id": "org",
                "roles": [{"id": a} for a in agents],
                "communication": [
                    list((x, y) if x <= y else (y, x))
                    for i, x in enumerate(agents) for y in agents[i + 1:]
                ],
                "task": {
                    "id": net.id,
                    "places": [
                        {"id": p.id, "colorset": p.colorset,
                         **({"initial": [t.value for t in p.initial]}
                            if p.initial else {})}
                        for p in net.places
                    ],
                    "transitions": [
                        {"id": t.id, "actor": t.actor, "procedure": t.procedure}
                        for t in net.transitions
                    ],
                    "arcs": [
                        {"place": a.place, "transition": a.transition,
                         "direction": a.direction, "label": a.label}
                        for a in net.arcs
                    ],
                },
            },
            "agents": [{"id": a, "kind": "software", "roles": [a]}
                       for a in agents],
        }
        first = parse_spec(json.dumps(doc))
        assert first.ok, (seed, first.diagnostics)
        canonical = serialize_spec(first.spec)
        second = parse_spec(canonical)
        assert second.ok
        assert serialize_spec(second.spec) == canonical

    corpus = sorted(MALFORMED.glob("*.json"))
    assert len(corpus) >= 10
    for path in corpus:
        outcome = parse_spec(path.read_text())
        assert outcome.spec is None
        assert outcome.diagnostics
        assert all(d.line >= 1 and d.col >= 1 for d in outcome.diagnostics)
    report(7, "fixture and 20 generated specs round-trip; %d malformed files "
              "all diagnosed with positions" % len(corpus))


def test_criterion_8_golden_artifacts(tmp_path):
    society = str(FIXTURES / "pmo.society.json")
    assert main(["derive", society, "-o", str(tmp_path)]) == 0
    names = ("WP.task.json", "PP.task.json", "M.task.json", "channels.json")
    for name in names:
        assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), name
    target = tmp_path / "line.dot"
    assert main(["export-dot", society, "-o", str(target)]) == 0
    assert target.read_bytes() == (GOLDEN / "line.dot").read_bytes()
    for agent in ("WP", "PP", "M"):
        out = tmp_path / ("%s.dot" % agent)
        assert main(["export-dot", str(tmp_path / ("%s.task.json" % agent)),
                     "-o", str(out)]) == 0
        assert out.read_bytes() == (GOLDEN / ("%s.task.dot" % agent)).read_bytes()
    report(8, "derive and export-dot outputs byte-identical to %d goldens"
           % (len(names) + 4))
