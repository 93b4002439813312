"""Command-line entry point: check, simulate, generate, graph.

Exit codes are a stable contract: 0 success, 1 model errors, 2 usage or
I/O or parse failure, 3 simulation error, 4 emit error. All machine-readable
output is JSON lines; ARC_COLOR=never|auto controls diagnostic coloring.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import codegen
from .checker import SymbolTable, check, has_errors
from .errors import ArcError, EvalError, MissingBinding
from .model import InstanceModel, Native, elaborate
from .parser import Diagnostic, SourceUnit, parse
from .sim import NativeImpl, ScriptedStub, run
from .trace import TraceFormatError, read_trace

EXIT_OK = 0
EXIT_MODEL = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3
EXIT_EMIT = 4


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


def _color_enabled() -> bool:
    mode = os.environ.get("ARC_COLOR", "auto")
    if mode == "never":
        return False
    return sys.stderr.isatty()


def _print_diagnostics(diagnostics: list[Diagnostic], as_json: bool) -> None:
    color = _color_enabled()
    for d in diagnostics:
        if as_json:
            print(json.dumps({"severity": d.severity, "code": d.code, "message": d.message,
                              "file": d.file, "line": d.line, "column": d.column},
                             separators=(",", ":")))
        elif color:
            hue = "31" if d.severity == "error" else "33"
            prefix = f"{d.file}:{d.line}:{d.column}: "
            print(f"{prefix}\x1b[{hue}m{d.severity}[{d.code}]\x1b[0m: {d.message}", file=sys.stderr)
        else:
            print(d.render(), file=sys.stderr)


def _load_units(paths: list[str], as_json: bool) -> list[SourceUnit]:
    units = []
    failed = False
    for path in paths:
        try:
            with open(path, "r", encoding="utf-8") as fp:
                text = fp.read()
        except OSError as e:
            print(f"error: cannot read '{path}': {e.strerror}", file=sys.stderr)
            raise _Exit(EXIT_USAGE)
        except UnicodeDecodeError:
            print(f"error: '{path}' is not valid UTF-8", file=sys.stderr)
            raise _Exit(EXIT_USAGE)
        result = parse(text, path)
        _print_diagnostics(result.diagnostics, as_json)
        if result.unit is None:
            failed = True
        else:
            units.append(result.unit)
    if failed:
        raise _Exit(EXIT_USAGE)
    return units


def _check_units(units: list[SourceUnit], as_json: bool) -> SymbolTable:
    table, diagnostics = check(units)
    _print_diagnostics(diagnostics, as_json)
    if has_errors(diagnostics):
        raise _Exit(EXIT_MODEL)
    return table


def _elaborated(table: SymbolTable, root_name: str) -> InstanceModel:
    components = table.components()
    if root_name not in components:
        print(f"error: no component named '{root_name}' in the given files", file=sys.stderr)
        raise _Exit(EXIT_USAGE)
    return elaborate(components[root_name], table.globals)


def cmd_check(args) -> int:
    units = _load_units(args.files, args.json)
    _check_units(units, args.json)
    return EXIT_OK


def _stub_bindings(model: InstanceModel, stubs_path: str | None) -> dict[str, NativeImpl]:
    """Turn a stub schedule file into ScriptedStub bindings. Every key must
    address an out-port of a native instance; an instance mentioned anywhere
    in the file is fully scripted."""
    bindings: dict[str, NativeImpl] = {}
    if stubs_path is None:
        return bindings
    schedule = read_trace(stubs_path)
    natives = {n.path: n for n in model.nodes()
               if n.behavior is not None and isinstance(n.behavior, Native)}
    per_instance: dict[str, dict[int, dict[str, object]]] = {}
    for tick, row in schedule.items():
        for key, value in row.items():
            path, _, port = key.rpartition(".")
            node = natives.get(path)
            if node is None or node.port(port) is None or node.port(port).direction != "out":
                print(f"error: stub key '{key}' does not address a native instance's out-port",
                      file=sys.stderr)
                raise _Exit(EXIT_USAGE)
            per_instance.setdefault(path, {}).setdefault(tick, {})[port] = value
    for path, sched in per_instance.items():
        bindings[path] = ScriptedStub(sched)
    return bindings


def cmd_simulate(args) -> int:
    units = _load_units(args.files, args.json)
    table = _check_units(units, args.json)
    model = _elaborated(table, args.root)

    env: dict[int, dict[str, object]] = {}
    if args.input:
        try:
            env = read_trace(args.input)
        except OSError as e:
            print(f"error: cannot read '{args.input}': {e.strerror}", file=sys.stderr)
            return EXIT_USAGE
        except TraceFormatError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
        root = model.root
        valid = {f"{root.path}.{p.name}" for p in root.ports if p.direction == "in"}
        for tick, row in env.items():
            for key in row:
                if key not in valid:
                    print(f"error: input key '{key}' is not an in-port of the root component",
                          file=sys.stderr)
                    return EXIT_USAGE
    try:
        bindings = _stub_bindings(model, args.stubs)
    except (OSError, TraceFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        trace = run(model, bindings=bindings, env=env, ticks=args.ticks, enums=table.globals)
    except (MissingBinding, EvalError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME

    try:
        with open(args.output, "w", encoding="utf-8", newline="") as fp:
            trace.write(fp)
    except OSError as e:
        print(f"error: cannot write '{args.output}': {e.strerror}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_generate(args) -> int:
    units = _load_units(args.files, args.json)
    table = _check_units(units, args.json)
    model = _elaborated(table, args.root)
    try:
        backend = codegen.get_backend(args.backend)
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    files = backend.generate(model, dict(args.option or ()))
    report = codegen.emit(files, args.out)
    print(report.summary())
    for path, message in report.errors:
        print(f"error: {path}: {message}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_EMIT


def cmd_graph(args) -> int:
    units = _load_units(args.files, args.json)
    table = _check_units(units, args.json)
    model = _elaborated(table, args.root)
    files = codegen.get_backend("dot").generate(model, {})
    content = files[0].content.decode("utf-8")
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fp:
                fp.write(content)
        except OSError as e:
            print(f"error: cannot write '{args.out}': {e.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(content)
    return EXIT_OK


def _parse_option(value: str) -> tuple[str, str]:
    key, sep, val = value.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"option must look like key=value, got '{value}'")
    return key, val


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arckit",
                                 description="Toolchain for .arc component & connector models")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("files", nargs="+", help=".arc model files (one global namespace)")
        p.add_argument("--json", action="store_true", help="diagnostics as JSON lines on stdout")

    p = sub.add_parser("check", help="parse and check models")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", help="run a model and write its trace")
    add_common(p)
    p.add_argument("--root", required=True, help="root component name")
    p.add_argument("--input", help="environment trace (JSONL) for the root's in-ports")
    p.add_argument("--stubs", help="scripted outputs (JSONL) for native instances")
    p.add_argument("--ticks", type=int, required=True, help="number of ticks to run")
    p.add_argument("--output", required=True, help="output trace file (JSONL)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("generate", help="generate code from a model")
    add_common(p)
    p.add_argument("--root", required=True)
    p.add_argument("--backend", required=True, choices=codegen.backend_names())
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--option", action="append", type=_parse_option, metavar="KEY=VALUE")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("graph", help="emit a Graphviz architecture diagram")
    add_common(p)
    p.add_argument("--root", required=True)
    p.add_argument("--out", help="output .dot file (default: stdout)")
    p.set_defaults(func=cmd_graph)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    if getattr(args, "ticks", None) is not None and args.ticks < 0:
        print("error: --ticks must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _Exit as e:
        return e.code
    except ArcError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
