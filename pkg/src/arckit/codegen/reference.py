"""Reference deployment backend: emits a runnable TypeScript project.

Layout (defaults; ``src`` and ``impl`` are configurable via options):

    tsconfig.json            Generated
    arc-manifest.json        Generated: generator version, model hash, file
                             inventory with per-file content hashes
    src/runtime/*.ts         Generated: the static scheduler/trace/value
                             runtime (scaffold assets)
    src/components/*.ts      Generated: one unit per atomic instance;
                             native instances get a wrapper that forwards to
                             the user implementation
    src/model.ts             Generated: wiring tables
    src/main.ts              Generated: CLI entry point
    impl/<Component>Impl.ts  UserStub: no-op implementation skeleton,
                             created once and never overwritten

Generation is flattened: composed components survive only as the driver
table. Everything is deterministic; running the generated program on a
trace yields byte-identical output to the simulator.
"""

from __future__ import annotations

import hashlib
import json
from typing import Mapping

from .. import parser
from ..errors import UnsupportedConstruct
from ..model import (
    AbsentOut, AbsentPattern, Arith, Automaton, BoolOp, Cmp, InstanceModel,
    InstanceNode, Lit, LitPattern, Name, Native, RuleTable, Wildcard,
)
from ..wiring import build_port_table
from . import GENERATED, GENERATOR_NAME, GENERATOR_VERSION, USER_STUB, GeneratedFile, register_backend
from .scaffold import MAIN_ASSET, RUNTIME_ASSETS, TSCONFIG_ASSET, render

_MARKER = f"// Generated by {GENERATOR_NAME} {GENERATOR_VERSION}"


def _ts_string(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _ts_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return f"{value}n"
    return _ts_string(value)


def _compile_expr(e, var_names: frozenset[str]) -> str:
    """Expression to TypeScript over ``(v, p)``; integers are BigInt and all
    arithmetic goes through the checked runtime helpers."""
    if isinstance(e, Lit):
        return _ts_value(e.value)
    if isinstance(e, Name):
        if e.ident in var_names:
            return f"v[{_ts_string(e.ident)}]"
        return f"V.rq(p[{_ts_string(e.ident)}], {_ts_string(e.ident)})"
    if isinstance(e, Arith):
        fn = {"+": "iadd", "-": "isub", "*": "imul", "/": "idiv"}[e.op]
        return f"V.{fn}({_compile_expr(e.left, var_names)}, {_compile_expr(e.right, var_names)})"
    if isinstance(e, Cmp):
        fn = {"==": "veq", "!=": "vne", "<": "ilt", "<=": "ile", ">": "igt", ">=": "ige"}[e.op]
        return f"V.{fn}({_compile_expr(e.left, var_names)}, {_compile_expr(e.right, var_names)})"
    if isinstance(e, BoolOp):
        left = _compile_expr(e.left, var_names)
        if e.op == "not":
            return f"!V.tb({left})"
        right = _compile_expr(e.right, var_names)
        op = "&&" if e.op == "and" else "||"
        return f"(V.tb({left}) {op} V.tb({right}))"
    raise UnsupportedConstruct(f"cannot compile expression {e!r}")


def _compile_action_fn(act, var_names: frozenset[str]) -> str:
    if isinstance(act, AbsentOut):
        return "null"
    return f"(v, p) => {_compile_expr(act, var_names)}"


def _compile_actions(actions, var_names: frozenset[str]) -> str:
    parts = [f"[{_ts_string(name)}, {_compile_action_fn(act, var_names)}]" for name, act in actions]
    return "[" + ", ".join(parts) + "]"


def _compile_pattern(pattern) -> str:
    parts = []
    for port, pat in pattern:
        if isinstance(pat, Wildcard):
            spec = '{ kind: "wild" }'
        elif isinstance(pat, AbsentPattern):
            spec = '{ kind: "absent" }'
        elif isinstance(pat, LitPattern):
            if not isinstance(pat.value, Lit):
                raise UnsupportedConstruct(
                    f"pattern on '{port}' is not a resolved constant; elaborate the model first")
            spec = f'{{ kind: "lit", value: {_ts_value(pat.value.value)} }}'
        else:
            raise UnsupportedConstruct(f"unknown pattern {pat!r}")
        parts.append(f"[{_ts_string(port)}, {spec}]")
    return "[" + ", ".join(parts) + "]"


def _module_name(path: str) -> str:
    return path.replace(".", "_")


def _header(model_name: str) -> str:
    return f"{_MARKER} for model {model_name} -- do not edit.\n"


def _ports_of(node: InstanceNode, direction: str) -> list[str]:
    return [p.name for p in node.ports if p.direction == direction]


def _component_unit(node: InstanceNode, model_name: str, impl_dir: str) -> str:
    b = node.behavior
    lines = [_header(model_name), 'import { AtomicDef } from "../runtime/scheduler";']
    in_ports = "[" + ", ".join(_ts_string(p) for p in _ports_of(node, "in")) + "]"
    out_ports = "[" + ", ".join(_ts_string(p) for p in _ports_of(node, "out")) + "]"

    if isinstance(b, Native):
        impl = f"{node.definition}Impl"
        config = ", ".join(f"{_ts_string(k)}: {_ts_value(v)}" for k, v in node.config)
        lines += [
            f'import {{ {impl} }} from "../../{impl_dir}/{impl}";',
            "",
            "export const def: AtomicDef = {",
            '  kind: "native",',
            f"  path: {_ts_string(node.path)},",
            f"  inPorts: {in_ports},",
            f"  outPorts: {out_ports},",
            f"  component: {_ts_string(node.definition)},",
            f"  config: {{ {config} }}," if config else "  config: {},",
            f"  makeImpl: () => {impl},",
            "};",
        ]
        return "\n".join(lines) + "\n"

    var_names = frozenset(v.name for v in b.variables)
    lines.append('import * as V from "../runtime/values";')
    lines.append("")
    var_inits = ", ".join(
        f"[{_ts_string(v.name)}, () => {_compile_expr(v.init, frozenset())}]" for v in b.variables)

    if isinstance(b, Automaton):
        lines += [
            "export const def: AtomicDef = {",
            '  kind: "automaton",',
            f"  path: {_ts_string(node.path)},",
            f"  inPorts: {in_ports},",
            f"  outPorts: {out_ports},",
            f"  vars: [{var_inits}],",
            f"  initialState: {_ts_string(b.initial_state)},",
            f"  initialActions: {_compile_actions(b.initial_outputs, var_names)},",
            "  transitions: [",
        ]
        for t in b.transitions:
            guard = "null" if t.guard is None else f"(v, p) => {_compile_expr(t.guard, var_names)}"
            lines.append(
                f"    {{ from: {_ts_string(t.source)}, to: {_ts_string(t.target)}, "
                f"pattern: {_compile_pattern(t.pattern)}, guard: {guard}, "
                f"actions: {_compile_actions(t.actions, var_names)} }},")
        lines += ["  ],", "};"]
    elif isinstance(b, RuleTable):
        lines += [
            "export const def: AtomicDef = {",
            '  kind: "rules",',
            f"  path: {_ts_string(node.path)},",
            f"  inPorts: {in_ports},",
            f"  outPorts: {out_ports},",
            f"  vars: [{var_inits}],",
            "  rules: [",
        ]
        for r in b.rules:
            guard = "null" if r.guard is None else f"(v, p) => {_compile_expr(r.guard, var_names)}"
            lines.append(
                f"    {{ pattern: {_compile_pattern(r.pattern)}, guard: {guard}, "
                f"actions: {_compile_actions(r.actions, var_names)} }},")
        lines += ["  ],", "};"]
    else:
        raise UnsupportedConstruct(f"unsupported behavior {type(b).__name__}")
    return "\n".join(lines) + "\n"


def _impl_stub(component: str, node: InstanceNode, src_dir: str) -> str:
    out_ports = _ports_of(node, "out")
    ports_note = ", ".join(out_ports) if out_ports else "(none)"
    return f"""// Implementation of native component {component}.
//
// This file was created once by the generator and is yours: regeneration
// never overwrites it. Keep per-instance state in the value returned by
// init and threaded through react. Out-ports of {component}: {ports_note}.
// Output ports left out of the returned record emit no message that tick.

import type {{ Msg, Value }} from "../{src_dir}/runtime/values";

export const {component}Impl = {{
  init(_config: Record<string, Value>): unknown {{
    return null;
  }},
  react(state: unknown, _inputs: Record<string, Msg>): [unknown, Record<string, Msg>] {{
    return [state, {{}}];
  }},
}};
"""


def canonical_model_text(model: InstanceModel) -> str:
    """Deterministic, position-free rendering of an instance model; the
    basis of the manifest's model hash."""
    out: list[str] = []

    def fmt_action(a) -> str:
        return "--" if isinstance(a, AbsentOut) else parser.format_expr(a)

    def fmt_behavior(b) -> list[str]:
        if isinstance(b, Native):
            return ["native"]
        lines = [f"var {v.type} {v.name} = {parser.format_expr(v.init)}" for v in b.variables]
        if isinstance(b, Automaton):
            lines.append(f"states {','.join(b.states)} initial {b.initial_state}")
            lines.append("init_actions " + ";".join(f"{n}={fmt_action(a)}" for n, a in b.initial_outputs))
            for t in b.transitions:
                pat = ";".join(f"{p}={parser._format_pattern(x)}" for p, x in t.pattern)
                guard = "" if t.guard is None else parser.format_expr(t.guard)
                acts = ";".join(f"{n}={fmt_action(a)}" for n, a in t.actions)
                lines.append(f"trans {t.source}->{t.target} [{pat}] {{{guard}}} / {acts}")
        else:
            for r in b.rules:
                pat = ";".join(f"{p}={parser._format_pattern(x)}" for p, x in r.pattern)
                guard = "" if r.guard is None else parser.format_expr(r.guard)
                acts = ";".join(f"{n}={fmt_action(a)}" for n, a in r.actions)
                lines.append(f"rule [{pat}] {{{guard}}} => {acts}")
        return lines

    for node in model.nodes():
        out.append(f"instance {node.path} : {node.definition}")
        for p in node.ports:
            out.append(f"  port {p.direction} {p.type} {p.name}")
        for k, v in node.config:
            out.append(f"  config {k} = {v!r}")
        for c in node.connectors:
            out.append(f"  connect {c.source} -> {c.target}")
        if node.behavior is not None:
            out.extend("  " + line for line in fmt_behavior(node.behavior))
    return "\n".join(out) + "\n"


def model_digest(model: InstanceModel) -> str:
    return "sha256:" + hashlib.sha256(canonical_model_text(model).encode("utf-8")).hexdigest()


class ReferenceBackend:
    name = "reference"

    def generate(self, model: InstanceModel, options: Mapping[str, str]) -> list[GeneratedFile]:
        src_dir = options.get("srcDir", "src")
        impl_dir = options.get("implDir", "impl")
        for label, d in (("srcDir", src_dir), ("implDir", impl_dir)):
            if not d or "/" in d or "\\" in d or d.startswith("."):
                raise ValueError(f"{label} must be a plain directory name, got {d!r}")
        model_name = model.root.definition
        slots = {"GENERATOR_VERSION": GENERATOR_VERSION, "MODEL_NAME": model_name,
                 "SRC_DIR": src_dir, "IMPL_DIR": impl_dir}

        files: list[GeneratedFile] = []
        for asset in RUNTIME_ASSETS:
            files.append(GeneratedFile(f"{src_dir}/{asset.path}", render(asset, slots), GENERATED))
        files.append(GeneratedFile(f"{src_dir}/{MAIN_ASSET.path}", render(MAIN_ASSET, slots), GENERATED))
        files.append(GeneratedFile("tsconfig.json", render(TSCONFIG_ASSET, slots), GENERATED))

        atoms = [n for n in model.nodes() if n.behavior is not None]
        for node in atoms:
            unit = _component_unit(node, model_name, impl_dir)
            files.append(GeneratedFile(
                f"{src_dir}/components/{_module_name(node.path)}.ts",
                unit.encode("utf-8"), GENERATED))

        # One implementation skeleton per native component definition.
        native_defs: dict[str, InstanceNode] = {}
        for node in atoms:
            if isinstance(node.behavior, Native) and node.definition not in native_defs:
                native_defs[node.definition] = node
        for component in sorted(native_defs):
            files.append(GeneratedFile(
                f"{impl_dir}/{component}Impl.ts",
                _impl_stub(component, native_defs[component], src_dir).encode("utf-8"),
                USER_STUB))

        files.append(GeneratedFile(f"{src_dir}/model.ts",
                                   self._model_unit(model, model_name).encode("utf-8"), GENERATED))

        manifest = self._manifest(model, model_name, files)
        files.append(GeneratedFile("arc-manifest.json", manifest.encode("utf-8"), GENERATED))
        return files

    def _model_unit(self, model: InstanceModel, model_name: str) -> str:
        table = build_port_table(model)
        root = model.root
        atoms = [n for n in model.nodes() if n.behavior is not None]

        lines = [_header(model_name), 'import { ModelDef } from "./runtime/scheduler";']
        for i, node in enumerate(atoms):
            lines.append(f'import {{ def as c{i} }} from "./components/{_module_name(node.path)}";')
        lines += ["", "export const model: ModelDef = {", f"  name: {_ts_string(model_name)},"]

        keys = ", ".join(_ts_string(k) for k in table.keys)
        lines.append(f"  portKeys: [{keys}],")

        lines.append("  drivers: {")
        for key in table.keys:
            d = table.drivers[key]
            if d.kind == "producer":
                spec = (f'{{ kind: "producer", path: {_ts_string(d.path)}, '
                        f'port: {_ts_string(d.port)} }}')
            elif d.kind == "env":
                spec = f'{{ kind: "env", key: {_ts_string(d.key)} }}'
            else:
                spec = '{ kind: "absent" }'
            lines.append(f"    {_ts_string(key)}: {spec},")
        lines.append("  },")

        lines.append("  atomics: [" + ", ".join(f"c{i}" for i in range(len(atoms))) + "],")

        root_in = [f"{root.path}.{p.name}" for p in root.ports if p.direction == "in"]
        lines.append("  rootInPorts: [" + ", ".join(_ts_string(k) for k in sorted(root_in)) + "],")

        lines.append("  nativeOuts: {")
        for node in atoms:
            if isinstance(node.behavior, Native):
                for p in _ports_of(node, "out"):
                    lines.append(f"    {_ts_string(f'{node.path}.{p}')}: "
                                 f"[{_ts_string(node.path)}, {_ts_string(p)}],")
        lines.append("  },")
        lines.append("};")
        return "\n".join(lines) + "\n"

    def _manifest(self, model: InstanceModel, model_name: str,
                  files: list[GeneratedFile]) -> str:
        inventory = [
            {"path": f.path, "kind": f.kind,
             "sha256": hashlib.sha256(f.content).hexdigest()}
            for f in sorted(files, key=lambda f: f.path)
        ]
        doc = {
            "generator": f"{GENERATOR_NAME} {GENERATOR_VERSION}",
            "model": model_name,
            "modelHash": model_digest(model),
            "files": inventory,
        }
        return json.dumps(doc, indent=2) + "\n"


register_backend("reference", ReferenceBackend)
