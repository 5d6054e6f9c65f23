"""Command line front end.

    commont <command> [--ontology FILE]... [--json] [--max-steps N] [--run ACT[,ACT]...] ARG [ARG]

Without ``--ontology`` the bundled catalog is used; ``@default`` names it
explicitly so it can be combined with application files. Protocol arguments
may be paths or ``@asktime``, ``@p1``, ``@p2`` for the bundled protocols.

Exit codes: 0 success (or: a relation holds / subsumption is true), 1 a
negative answer or violations, 2 usage, parse or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CommontError, InvalidActError, ParseError
from .ontology import Ontology, default_catalog_text, load_ontology_sources
from .protocol import (
    Protocol,
    example_protocol_text,
    load_protocol,
    simulate,
    validate,
)
from .relations import compare
from .semantics import fluent_to_json
from .traces import trace_set

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _read_ontology(paths: list[str] | None) -> Ontology:
    sources = []
    for path in paths or ["@default"]:
        if path == "@default":
            sources.append((default_catalog_text(), "catalog.ont"))
        else:
            sources.append((Path(path).read_text(encoding="utf-8"), path))
    return load_ontology_sources(sources)


def _read_protocol(arg: str, ont: Ontology, check: bool = True) -> Protocol:
    if arg.startswith("@"):
        return load_protocol(example_protocol_text(arg[1:]), ont, arg, check)
    return load_protocol(Path(arg).read_text(encoding="utf-8"), ont, arg, check)


def _emit_json(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _diag_json(d) -> dict:
    span = None if d.span is None else {"file": d.span.file, "line": d.span.line, "column": d.span.column}
    return {"severity": d.severity, "code": d.code, "message": d.message, "span": span}


def cmd_validate(args) -> int:
    ont = _read_ontology(args.ontology)
    p = _read_protocol(args.files[0], ont, check=False)
    report = validate(p, ont)
    if args.json:
        _emit_json(
            {
                "protocol": report.protocol,
                "ok": report.ok,
                "findings": [_diag_json(d) for d in report.findings],
                "runs": [
                    {
                        "acts": list(rc.run.acts),
                        "final_fluents": None
                        if rc.final_store is None
                        else [dict(fluent_to_json(f), tick=t) for f, t in rc.final_store],
                        "findings": [_diag_json(d) for d in rc.findings],
                    }
                    for rc in report.runs
                ],
            }
        )
    else:
        print(report)
    return EXIT_OK if report.ok else EXIT_NO


def cmd_simulate(args) -> int:
    ont = _read_ontology(args.ontology)
    p = _read_protocol(args.files[0], ont)
    acts = [a.strip() for a in args.run.split(",") if a.strip()] if args.run else []
    try:
        steps = simulate(p, ont, acts, max_steps=args.max_steps)
    except InvalidActError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO
    if args.json:
        _emit_json(
            [
                {
                    "step": i,
                    "state": state,
                    "act": None if i == 0 else acts[i - 1],
                    "fluents": [dict(fluent_to_json(f), tick=t) for f, t in store],
                }
                for i, (state, store) in enumerate(steps)
            ]
        )
    else:
        for i, (state, store) in enumerate(steps):
            after = "" if i == 0 else f" after {acts[i - 1]}"
            print(f"F{i} [{state}]{after}: {store}")
    return EXIT_OK


def cmd_traces(args) -> int:
    ont = _read_ontology(args.ontology)
    p = _read_protocol(args.files[0], ont)
    traces = sorted(trace_set(p, ont), key=str)
    if args.json:
        _emit_json([t.to_json() for t in traces])
    else:
        for t in traces:
            print(t)
    return EXIT_OK


def cmd_compare(args) -> int:
    ont = _read_ontology(args.ontology)
    a = _read_protocol(args.files[0], ont)
    b = _read_protocol(args.files[1], ont)
    verdict = compare(a, b, ont)
    if args.json:
        _emit_json(verdict.to_json())
    else:
        print(verdict.table())
    return EXIT_OK if verdict.any_holds else EXIT_NO


def cmd_subsumes(args) -> int:
    ont = _read_ontology(args.ontology)
    general, specific = args.files
    result = ont.subsumes(general, specific)
    if args.json:
        _emit_json({"general": general, "specific": specific, "subsumes": result})
    else:
        print("true" if result else "false")
    return EXIT_OK if result else EXIT_NO


COMMANDS = {
    "validate": (cmd_validate, 1, "check structure and the final-state rule", "PROTOCOL"),
    "simulate": (cmd_simulate, 1, "replay a scripted run and list the fluents per step", "PROTOCOL"),
    "traces": (cmd_traces, 1, "print the trace set of an acyclic protocol", "PROTOCOL"),
    "compare": (cmd_compare, 2, "decide the relations between two protocols", "PROTOCOL"),
    "subsumes": (cmd_subsumes, 2, "is SPECIFIC a subclass of GENERAL", "CLASS"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--ontology", action="append", metavar="FILE",
        help="ontology file (repeatable; '@default' is the bundled catalog)",
    )
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-steps", type=int, metavar="N", help="bound on run length (simulate)")
    common.add_argument("--run", metavar="ACT[,ACT]...", help="acts to replay (simulate)")

    parser = argparse.ArgumentParser(prog="commont", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, arity, help_text, metavar) in COMMANDS.items():
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        if name == "subsumes":
            cmd.add_argument("files", nargs=2, metavar=("GENERAL", "SPECIFIC"))
        else:
            cmd.add_argument("files", nargs=arity, metavar=metavar)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except CommontError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
