"""Command line: validate, derive, render, simulate, verify, serve.

Exit codes: 0 on success, 1 for document problems, 2 for runtime
failures, 3 when verification finds a counterexample.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .derive import compose, verify_equivalence
from .dot import emit_dot
from .messaging import BackpressureExceeded
from .runtime import ProcedureFailure, Starvation, UnscriptedRequest, run_society
from .specio import (
    derive_society,
    parse_spec,
    parse_task,
    serialize_channels,
    serialize_task,
    society_from_spec,
    typed_answers,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2
EXIT_COUNTEREXAMPLE = 3


def _read(path: str) -> str | None:
    try:
        return Path(path).read_text()
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return None


def _load_spec(path: str):
    """(spec, exit code); diagnostics go to stderr."""
    text = _read(path)
    if text is None:
        return None, EXIT_RUNTIME
    result = parse_spec(text)
    if not result.ok:
        for diag in result.diagnostics:
            print("%s:%d:%d: [%s] %s"
                  % (path, diag.line, diag.col, diag.category, diag.message),
                  file=sys.stderr)
        return None, EXIT_INVALID
    return result.spec, EXIT_OK


def cmd_validate(args) -> int:
    spec, code = _load_spec(args.spec)
    if spec is None:
        return code
    org = spec.organization
    print("ok: society %r, %d roles, %d agents, task %r with %d transitions"
          % (spec.id, len(org.roles), len(spec.agents),
             org.global_task.id, len(org.global_task.transitions)))
    return EXIT_OK


def cmd_derive(args) -> int:
    spec, code = _load_spec(args.spec)
    if spec is None:
        return code
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    _, tasks, table = derive_society(spec)
    for task in tasks:
        path = out / ("%s.task.json" % task.agent)
        path.write_text(serialize_task(task, spec.colorsets))
        print(path)
    path = out / "channels.json"
    path.write_text(serialize_channels(table, spec.id))
    print(path)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    text = _read(args.document)
    if text is None:
        return EXIT_RUNTIME
    result = parse_spec(text)
    if result.ok:
        net, _, _ = derive_society(result.spec)
    else:
        task, _ = parse_task(text)
        if task is None:
            for diag in result.diagnostics:
                print("%s:%d:%d: [%s] %s"
                      % (args.document, diag.line, diag.col,
                         diag.category, diag.message), file=sys.stderr)
            return EXIT_INVALID
        net = task.net
    rendered = emit_dot(net)
    if args.output:
        Path(args.output).write_text(rendered)
        print(args.output)
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec, code = _load_spec(args.spec)
    if spec is None:
        return code
    answers = {}
    if args.script:
        text = _read(args.script)
        if text is None:
            return EXIT_RUNTIME
        try:
            answers = typed_answers(spec, json.loads(text))
        except (ValueError, TypeError) as exc:
            print("error: bad answer script: %s" % exc, file=sys.stderr)
            return EXIT_RUNTIME
    society = society_from_spec(spec, seed=args.seed)
    try:
        run_society(society, answers, max_steps=args.max_steps)
    except (UnscriptedRequest, Starvation, ProcedureFailure,
            BackpressureExceeded) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_RUNTIME
    for event in society.trace:
        if event.kind == "work":
            print("%3d %s %s" % (event.seq, event.agent, event.procedure))
        elif event.kind == "emission":
            print("%3d %s -> %s (%s)"
                  % (event.seq, event.channel[0], event.channel[1], event.action))
        else:
            print("%3d %s <- %s (%s)"
                  % (event.seq, event.channel[1], event.channel[0], event.action))
    works = sum(1 for e in society.trace if e.kind == "work")
    print("quiescent after %d occurrences (%d work)" % (len(society.trace), works))
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, code = _load_spec(args.spec)
    if spec is None:
        return code
    net, tasks, table = derive_society(spec)
    composed = compose(tasks, table)
    report = verify_equivalence(net, composed, args.depth)
    if report.equal:
        print("equivalent at depth %d: %d channels, no blocked receptions"
              % (report.depth, len(table)))
        return EXIT_OK
    print("NOT equivalent at depth %d" % report.depth, file=sys.stderr)
    if report.counterexample is not None:
        side = "missing" if report.missing else "extra"
        shown = " ; ".join("%s.%s" % (o.actor, o.procedure)
                           for o in report.counterexample)
        print("%s trace: %s" % (side, shown or "<empty>"), file=sys.stderr)
    print("missing %d, extra %d" % (report.missing_count, report.extra_count),
          file=sys.stderr)
    for tid, channel, action in report.blocked_receptions:
        print("blocked reception: %s on %s->%s (%s)"
              % (tid, channel[0], channel[1], action), file=sys.stderr)
    return EXIT_COUNTEREXAMPLE


def cmd_serve(args) -> int:
    import uvicorn

    from .server import build_app

    spec, code = _load_spec(args.spec)
    if spec is None:
        return code
    app = build_app(society_from_spec(spec, seed=args.seed))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orgweave",
        description="derive and run organizations of heterogeneous agents")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a society document")
    p.add_argument("spec")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("derive", help="write per-agent task and channel files")
    p.add_argument("spec")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_derive)

    p = sub.add_parser("export-dot", help="render a society or task file")
    p.add_argument("document")
    p.add_argument("-o", "--output", default="")
    p.set_defaults(fn=cmd_export_dot)

    p = sub.add_parser("simulate", help="run a society with scripted answers")
    p.add_argument("spec")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--script", default="")
    p.add_argument("--max-steps", type=int, default=500)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="compare composed tasks with the shared task")
    p.add_argument("spec")
    p.add_argument("--depth", type=int, default=8)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="expose a society over HTTP")
    p.add_argument("spec")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
