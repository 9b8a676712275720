"""Command-line front end: one subcommand per assistant plus the
service, the wire-protocol loop and the evaluation harness.

Non-interactive runs apply the given constraints once, print the
expression script and optionally write the output dataset; interactive
mode runs the full recommend / refine / accept loop on the terminal.
Exit codes: 0 on success/accept, 2 on conflicting constraints, 1 on
any other error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import (
    ConflictingConstraintsError,
    Session,
    WrangleError,
    session_init,
)
from .registry import DEFAULT_REGISTRY
from .table import write_csv

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFLICT = 2


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="input dataset path")
    parser.add_argument("--constraint", action="append", default=[], metavar="C",
                        help="constraint in the assistant's grammar (repeatable)")
    parser.add_argument("--interactive", action="store_true",
                        help="run the refine loop on the terminal")
    parser.add_argument("--replay", metavar="FILE",
                        help="replay a recorded constraint script (JSON)")
    parser.add_argument("--emit-script", metavar="PATH", help="write the expression script")
    parser.add_argument("--out", metavar="PATH", help="write the output dataset")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--preview-rows", type=int, default=10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wrangle", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    datadiff = sub.add_parser("datadiff", help="reconcile an input table to a reference")
    _add_common_flags(datadiff)
    datadiff.add_argument("--reference", required=True, help="reference dataset path")
    datadiff.add_argument("--sample-rows", type=int, default=None)

    dialect = sub.add_parser("csv-dialect", help="detect the CSV formatting dialect")
    _add_common_flags(dialect)
    dialect.add_argument("--max-lines", type=int, default=1000)

    typeinfer = sub.add_parser("type-infer", help="infer a column's primitive type")
    _add_common_flags(typeinfer)
    typeinfer.add_argument("--column", default=None, help="column name or 1-based index")

    semantic = sub.add_parser("semantic-type", help="predict a column's semantic type")
    _add_common_flags(semantic)
    semantic.add_argument("--column", default=None)
    semantic.add_argument("--gazetteer", required=True, help="type<TAB>value catalog file")
    semantic.add_argument("--epsilon", type=float, default=0.3)
    semantic.add_argument("--n-samples", type=int, default=8)
    semantic.add_argument("--sample-size", type=int, default=4)

    outlier = sub.add_parser("outlier", help="remove outlier values from a numeric column")
    _add_common_flags(outlier)
    outlier.add_argument("--column", default=None)
    outlier.add_argument("--m", type=float, default=3.0, help="sigma multiplier")

    rows = sub.add_parser("outlier-rows", help="remove aggregate rows via categorical filters")
    _add_common_flags(rows)
    rows.add_argument("--m", type=float, default=3.0)

    serve = sub.add_parser("serve", help="run the HTTP session service")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--data-dir", default=None)

    wire = sub.add_parser("wire", help="serve the stdin/stdout wire protocol")
    wire.add_argument("--assistant", required=True)
    wire.add_argument("--out-dir", default=None)
    wire.add_argument("--gazetteer", default=None)
    wire.add_argument("--column", default=None)
    wire.add_argument("--m", type=float, default=None)

    evaluate = sub.add_parser("eval", help="oracle-driven interaction counting")
    evaluate.add_argument("--assistant", default="datadiff",
                          choices=["datadiff", "csv-dialect", "type-infer"])
    evaluate.add_argument("--cases", type=int, default=100)
    evaluate.add_argument("--seed", type=int, default=7)
    evaluate.add_argument("--out", default=None, help="write the report as CSV")
    evaluate.add_argument("--corruptions", default="all", choices=["schema", "all"],
                          help="schema: reorder/delete/insert only")

    return parser


def _session_config(args: argparse.Namespace) -> dict:
    config = {}
    if args.command == "datadiff" and args.sample_rows is not None:
        config["sample_rows"] = args.sample_rows
        config["sample_seed"] = args.seed
    if args.command == "csv-dialect":
        config["max_lines"] = args.max_lines
    if args.command in ("type-infer", "outlier", "semantic-type") and args.column:
        config["column"] = args.column
    if args.command == "semantic-type":
        config.update(
            gazetteer=args.gazetteer,
            epsilon=args.epsilon,
            n_samples=args.n_samples,
            sample_size=args.sample_size,
            seed=args.seed,
        )
    if args.command in ("outlier", "outlier-rows"):
        config["m"] = args.m
    return config


def _bindings(args: argparse.Namespace) -> dict:
    bindings = {"input": args.input}
    if getattr(args, "reference", None):
        bindings["reference"] = args.reference
    return bindings


def _run_assistant(args: argparse.Namespace) -> int:
    constraints = list(args.constraint)
    if args.replay:
        replay = json.loads(Path(args.replay).read_text(encoding="utf-8"))
        constraints = replay.get("constraints", []) + constraints

    session = session_init(
        args.command,
        _bindings(args),
        registry=DEFAULT_REGISTRY,
        constraints=constraints,
        preview_rows=args.preview_rows,
        **_session_config(args),
    )

    if args.interactive:
        code = _interactive_loop(session)
        if code != EXIT_OK:
            return code
    else:
        session.step()
        session.accept()

    result = session.result
    assert result is not None
    print(result.script_text)
    if args.command == "csv-dialect":
        _print_ranking(session)
    for warning in result.output.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if args.emit_script:
        Path(args.emit_script).write_text(result.script_text + "\n", encoding="utf-8")
    if args.out:
        write_csv(result.output.table, args.out)
    return EXIT_OK


def _print_ranking(session: Session) -> None:
    ranking = session.assistant.ranking(session.data, session.interactions)
    print("# rank consistency pattern type dialect")
    for position, scored in enumerate(ranking, 1):
        print(
            f"# {position} {scored.consistency:.6g} {scored.pattern:.6g}"
            f" {scored.type:.6g} {scored.dialect.render()}"
        )


def _render_preview(rec) -> str:
    lines = []
    widths = [len(h) for h in rec.preview.header]
    for row in rec.preview.rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    widths = [min(w, 24) for w in widths]

    def fmt(cells):
        return " | ".join(c[:24].ljust(w) for c, w in zip(cells, widths))

    lines.append(fmt(rec.preview.header))
    if rec.preview.annotations:
        lines.append(fmt([a or "" for a in rec.preview.annotations]))
    lines.append("-+-".join("-" * w for w in widths))
    for row in rec.preview.rows:
        lines.append(fmt(row))
    return "\n".join(lines)


def _interactive_loop(session: Session) -> int:
    while True:
        rec = session.step()
        print()
        print(_render_preview(rec))
        print()
        print("recommended script:")
        print("  " + rec.script.replace("\n", "\n  ") if rec.script else "  (empty)")
        print()
        for index, choice in enumerate(rec.choices):
            print(f"  [{index}] {choice.label}")
        print("  [a] accept, [q] quit")
        answer = input("> ").strip().lower()
        if answer == "a":
            session.accept()
            return EXIT_OK
        if answer == "q":
            return EXIT_ERROR
        try:
            session.select(int(answer))
        except (ValueError, WrangleError) as exc:
            print(f"bad selection: {exc}", file=sys.stderr)


def _run_eval(args: argparse.Namespace) -> int:
    from . import evaluation

    if args.assistant == "datadiff":
        kinds = evaluation.SCHEMA_CORRUPTIONS if args.corruptions == "schema" else evaluation.ALL_CORRUPTIONS
        traces = evaluation.run_datadiff_cases(args.cases, args.seed, kinds)
    elif args.assistant == "csv-dialect":
        traces = evaluation.run_dialect_cases(args.cases, args.seed)
    else:
        traces = evaluation.run_typeinfer_cases(args.cases, args.seed)
    report = evaluation.report(traces)
    print(report.render())
    if args.out:
        Path(args.out).write_text(report.to_csv(), encoding="utf-8")
    return EXIT_OK


def _run_wire(args: argparse.Namespace) -> int:
    config = {}
    if args.gazetteer:
        config["gazetteer"] = args.gazetteer
    if args.column:
        config["column"] = args.column
    if args.m is not None:
        config["m"] = args.m
    assistant = DEFAULT_REGISTRY.create(args.assistant, **config)
    from .wire import run_process_loop

    run_process_loop(assistant, sys.stdin, sys.stdout, args.out_dir)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            from .service import main as serve_main

            serve_main(port=args.port, data_dir=args.data_dir)
            return EXIT_OK
        if args.command == "wire":
            return _run_wire(args)
        if args.command == "eval":
            return _run_eval(args)
        return _run_assistant(args)
    except ConflictingConstraintsError as exc:
        print(f"error: conflicting constraints: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except WrangleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
