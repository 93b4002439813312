"""Well-formedness checking and symbol resolution.

Rules enforced (diagnostic codes match the rule numbers):

  W1   unique names per scope (global types, enum values, and per component:
       ports, params, subcomponents, behavior variables, states)
  W2   a connector source is a subcomponent's out-port or the enclosing
       component's in-port
  W3   a connector target is a subcomponent's in-port or the enclosing
       component's out-port
  W4   at most one connector per target port (fan-in forbidden);
       W4b unconnected target ports warn
  W5   source type equals target type after substitution
  W6   behaviors touch only the embedding component's ports and their own
       variables: patterns read in-ports, actions write out-ports/variables
  W7   type/config argument arity and types match the definition; config
       arguments must be constant
  W8   exactly one of {subcomponents, behavior} per component
  W9   automaton initial state and transition endpoints are declared states
  W10  no recursive instantiation
  W11  every type/component/name reference resolves
  W12  expressions type-check (guards Boolean, actions match port/variable
       types, integer literals fit signed 64 bit)
  W13  (warning) two guardless transitions from one state have overlapping
       patterns; the earlier declaration wins at runtime

All failures are diagnostics, never exceptions; the result list is sorted by
(file, line, column, code) so output is stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import model as m
from .parser import Diagnostic, SourceUnit

_EOF = m.Pos(1, 1)


@dataclass
class ComponentScope:
    component: m.ComponentType
    file: str
    # ident -> kind: port-in, port-out, var, state, sub, typeParam, configParam
    kinds: dict[str, str] = field(default_factory=dict)
    var_types: dict[str, m.TypeExpr] = field(default_factory=dict)
    config_types: dict[str, m.TypeExpr] = field(default_factory=dict)
    port_types: dict[str, m.TypeExpr] = field(default_factory=dict)


@dataclass
class SymbolTable:
    """Global name table plus one scope per component definition."""

    globals: dict[str, object] = field(default_factory=dict)  # EnumDecl | ComponentType
    enum_of_value: dict[str, str] = field(default_factory=dict)
    scopes: dict[str, ComponentScope] = field(default_factory=dict)

    def enums(self) -> dict[str, m.EnumDecl]:
        return {k: v for k, v in self.globals.items() if isinstance(v, m.EnumDecl)}

    def components(self) -> dict[str, m.ComponentType]:
        return {k: v for k, v in self.globals.items() if isinstance(v, m.ComponentType)}


class _Checker:
    def __init__(self) -> None:
        self.table = SymbolTable()
        self.diagnostics: list[Diagnostic] = []
        self.files: dict[str, str] = {}  # component/enum name -> file

    def report(self, severity: str, code: str, message: str, file: str, pos: m.Pos | None) -> None:
        pos = pos or _EOF
        self.diagnostics.append(Diagnostic(severity, code, message, file, pos.line, pos.column))

    def error(self, code: str, message: str, file: str, pos: m.Pos | None) -> None:
        self.report("error", code, message, file, pos)

    def warn(self, code: str, message: str, file: str, pos: m.Pos | None) -> None:
        self.report("warning", code, message, file, pos)

    # -- pass 1: globals

    def collect_globals(self, units: list[SourceUnit]) -> None:
        for unit in units:
            for decl in list(unit.enums) + list(unit.components):
                if decl.name in self.table.globals:
                    self.error("W1", f"duplicate top-level name '{decl.name}'", unit.file, decl.pos)
                    continue
                self.table.globals[decl.name] = decl
                self.files[decl.name] = unit.file
        for unit in units:
            for e in unit.enums:
                if self.table.globals.get(e.name) is not e:
                    continue
                for v in e.values:
                    owner = self.table.enum_of_value.get(v)
                    if owner is not None and owner != e.name:
                        self.error("W1", f"enum value '{v}' is already defined by enum '{owner}'",
                                   unit.file, e.pos)
                    else:
                        self.table.enum_of_value[v] = e.name

    # -- types

    def resolve_type(self, t: m.TypeExpr, scope: ComponentScope, pos: m.Pos | None) -> m.TypeExpr | None:
        if isinstance(t, m.Primitive):
            return t
        if isinstance(t, m.TypeParam):
            if t.name in scope.component.type_params:
                return t
            self.error("W11", f"unknown type '{t.name}'", scope.file, pos)
            return None
        if isinstance(t, m.EnumRef):
            target = self.table.globals.get(t.name)
            if isinstance(target, m.EnumDecl):
                return t
            if t.name in scope.component.type_params:
                return m.TypeParam(t.name)
            self.error("W11", f"unknown type '{t.name}'", scope.file, pos)
            return None
        return None

    # -- pass 2: per-component scopes (W1)

    def build_scope(self, comp: m.ComponentType, file: str) -> ComponentScope:
        scope = ComponentScope(comp, file)

        def bind(name: str, kind: str, pos: m.Pos | None) -> bool:
            if name in scope.kinds:
                self.error("W1", f"'{name}' is already declared in component '{comp.name}'", file, pos)
                return False
            scope.kinds[name] = kind
            return True

        for tp in comp.type_params:
            bind(tp, "typeParam", comp.pos)
        for ptype, pname in comp.config_params:
            if bind(pname, "configParam", comp.pos):
                t = self.resolve_type(ptype, scope, comp.pos)
                if t is not None:
                    scope.config_types[pname] = t
        for p in comp.ports:
            if bind(p.name, f"port-{p.direction}", p.pos):
                t = self.resolve_type(p.type, scope, p.pos)
                if t is not None:
                    scope.port_types[p.name] = t
        for s in comp.subcomponents:
            bind(s.instance_name, "sub", s.pos)
        for b in comp.behaviors:
            if isinstance(b, (m.Automaton, m.RuleTable)):
                for v in b.variables:
                    if bind(v.name, "var", v.pos):
                        t = self.resolve_type(v.type, scope, v.pos)
                        if t is not None:
                            scope.var_types[v.name] = t
            if isinstance(b, m.Automaton):
                for st in b.states:
                    bind(st, "state", b.pos)
        return scope

    # -- expression typing (W11, W12)

    def type_of(self, e: m.Expr, scope: ComponentScope, *,
                vars_ok: bool, ports_ok: bool, what: str) -> m.TypeExpr | None:
        file = scope.file
        if isinstance(e, m.Lit):
            if e.kind == "Integer" and not (m.INT_MIN <= e.value <= m.INT_MAX):
                self.error("W12", f"integer literal {e.value} exceeds signed 64-bit range", file, e.pos)
                return None
            return m.Primitive(e.kind)
        if isinstance(e, m.Name):
            kind = scope.kinds.get(e.ident)
            if kind == "var":
                if not vars_ok:
                    self.error("W12", f"variable '{e.ident}' is not allowed in {what}", file, e.pos)
                    return None
                return scope.var_types.get(e.ident)
            if kind == "configParam":
                return scope.config_types.get(e.ident)
            if kind == "port-in":
                if not ports_ok:
                    self.error("W12", f"port '{e.ident}' is not allowed in {what}", file, e.pos)
                    return None
                return scope.port_types.get(e.ident)
            if kind == "port-out":
                self.error("W6", f"out-port '{e.ident}' cannot be read", file, e.pos)
                return None
            if kind is not None:
                self.error("W12", f"'{e.ident}' ({kind}) cannot be used in an expression", file, e.pos)
                return None
            enum_name = self.table.enum_of_value.get(e.ident)
            if enum_name is not None:
                return m.EnumRef(enum_name)
            self.error("W11", f"unresolved name '{e.ident}'", file, e.pos)
            return None
        if isinstance(e, m.Arith):
            lt = self.type_of(e.left, scope, vars_ok=vars_ok, ports_ok=ports_ok, what=what)
            rt = self.type_of(e.right, scope, vars_ok=vars_ok, ports_ok=ports_ok, what=what)
            for t in (lt, rt):
                if t is not None and t != m.INTEGER:
                    self.error("W12", f"operator '{e.op}' needs Integer operands, got {t}", file, e.pos)
                    return None
            return m.INTEGER if lt is not None and rt is not None else None
        if isinstance(e, m.Cmp):
            lt = self.type_of(e.left, scope, vars_ok=vars_ok, ports_ok=ports_ok, what=what)
            rt = self.type_of(e.right, scope, vars_ok=vars_ok, ports_ok=ports_ok, what=what)
            if lt is None or rt is None:
                return None
            if e.op in ("==", "!="):
                if lt != rt:
                    self.error("W12", f"cannot compare {lt} with {rt}", file, e.pos)
                    return None
            else:
                for t in (lt, rt):
                    if t != m.INTEGER:
                        self.error("W12", f"operator '{e.op}' needs Integer operands, got {t}", file, e.pos)
                        return None
            return m.BOOLEAN
        if isinstance(e, m.BoolOp):
            operands = [e.left] if e.right is None else [e.left, e.right]
            ok = True
            for operand in operands:
                t = self.type_of(operand, scope, vars_ok=vars_ok, ports_ok=ports_ok, what=what)
                if t is None:
                    ok = False
                elif t != m.BOOLEAN:
                    self.error("W12", f"operator '{e.op}' needs Boolean operands, got {t}", file, e.pos)
                    ok = False
            return m.BOOLEAN if ok else None
        return None

    def expect_type(self, e: m.Expr, want: m.TypeExpr, scope: ComponentScope, *,
                    vars_ok: bool, ports_ok: bool, what: str) -> None:
        got = self.type_of(e, scope, vars_ok=vars_ok, ports_ok=ports_ok, what=what)
        if got is not None and got != want:
            self.error("W12", f"{what} has type {got}, expected {want}",
                       scope.file, getattr(e, "pos", None))

    # -- behaviors (W6, W9, W12, W13)

    def check_behavior(self, comp: m.ComponentType, b: m.Behavior, scope: ComponentScope) -> None:
        file = scope.file
        if isinstance(b, m.Native):
            return
        for v in b.variables:
            want = scope.var_types.get(v.name)
            if want is not None:
                self.expect_type(v.init, want, scope, vars_ok=False, ports_ok=False,
                                 what=f"initializer of '{v.name}'")

        def check_pattern(pattern: tuple[tuple[str, m.Pattern], ...]) -> None:
            seen: set[str] = set()
            for port, pat in pattern:
                pos = getattr(pat, "pos", None)
                kind = scope.kinds.get(port)
                if kind is None:
                    self.error("W11", f"unknown port '{port}' in pattern", file, pos)
                    continue
                if kind != "port-in":
                    self.error("W6", f"patterns may only match in-ports; '{port}' is a {kind}", file, pos)
                    continue
                if port in seen:
                    self.error("W6", f"port '{port}' is matched twice in one pattern", file, pos)
                seen.add(port)
                if isinstance(pat, m.LitPattern):
                    want = scope.port_types.get(port)
                    if want is not None:
                        self.expect_type(pat.value, want, scope, vars_ok=False, ports_ok=False,
                                         what=f"pattern for port '{port}'")

        def check_actions(actions: tuple[tuple[str, m.Action], ...], *, allow_vars: bool,
                          context: str, ports_ok: bool = True) -> None:
            for name, act in actions:
                pos = getattr(act, "pos", None)
                kind = scope.kinds.get(name)
                if kind is None:
                    self.error("W11", f"unknown output or variable '{name}' in {context}", file, pos)
                    continue
                if kind == "port-out":
                    want = scope.port_types.get(name)
                elif kind == "var":
                    if not allow_vars:
                        self.error("W6", f"{context} may only assign out-ports, not variable '{name}'",
                                   file, pos)
                        continue
                    if isinstance(act, m.AbsentOut):
                        self.error("W12", f"variable '{name}' cannot be assigned the absence token",
                                   file, pos)
                        continue
                    want = scope.var_types.get(name)
                else:
                    self.error("W6", f"{context} may only assign out-ports and variables; "
                                     f"'{name}' is a {kind}", file, pos)
                    continue
                if isinstance(act, m.AbsentOut):
                    continue
                if want is not None:
                    self.expect_type(act, want, scope, vars_ok=True, ports_ok=ports_ok,
                                     what=f"value for '{name}'")

        if isinstance(b, m.Automaton):
            states = set(b.states)
            if b.initial_state not in states:
                self.error("W9", f"initial state '{b.initial_state}' is not declared", file, b.pos)
            check_actions(b.initial_outputs, allow_vars=False, context="the initial action block",
                          ports_ok=False)
            for t in b.transitions:
                if t.source not in states:
                    self.error("W9", f"state '{t.source}' is not declared", file, t.pos)
                if t.target not in states:
                    self.error("W9", f"state '{t.target}' is not declared", file, t.pos)
                check_pattern(t.pattern)
                if t.guard is not None:
                    self.expect_type(t.guard, m.BOOLEAN, scope, vars_ok=True, ports_ok=True,
                                     what="transition guard")
                check_actions(t.actions, allow_vars=True, context="a transition action")
            self.warn_overlaps(b, scope)
        elif isinstance(b, m.RuleTable):
            for r in b.rules:
                check_pattern(r.pattern)
                if r.guard is not None:
                    self.expect_type(r.guard, m.BOOLEAN, scope, vars_ok=True, ports_ok=True,
                                     what="rule condition")
                check_actions(r.actions, allow_vars=True, context="a rule action")

    def warn_overlaps(self, b: m.Automaton, scope: ComponentScope) -> None:
        """W13: two guardless transitions from one state whose patterns can
        match the same input assignment."""

        def compatible(p1: m.Pattern | None, p2: m.Pattern | None) -> bool:
            if p1 is None or p2 is None:
                return True  # unconstrained port
            if isinstance(p1, m.LitPattern) and isinstance(p2, m.LitPattern):
                v1, v2 = p1.value, p2.value
                if isinstance(v1, m.Lit) and isinstance(v2, m.Lit):
                    return v1.value == v2.value
                if isinstance(v1, m.Name) and isinstance(v2, m.Name):
                    return v1.ident == v2.ident
                return False
            if isinstance(p1, m.AbsentPattern):
                return isinstance(p2, m.AbsentPattern)
            if isinstance(p2, m.AbsentPattern):
                return False
            return True  # wildcard vs wildcard/literal: both may be present

        ts = [t for t in b.transitions if t.guard is None]
        for i, t1 in enumerate(ts):
            d1 = dict(t1.pattern)
            for t2 in ts[i + 1:]:
                if t1.source != t2.source:
                    continue
                d2 = dict(t2.pattern)
                if all(compatible(d1.get(p), d2.get(p)) for p in set(d1) | set(d2)):
                    self.warn("W13",
                              f"transitions from state '{t1.source}' have overlapping patterns; "
                              "the one declared first fires", scope.file, t2.pos)

    # -- composition (W2-W5, W7, W11)

    def sub_interface(self, comp: m.ComponentType, sub: m.SubcomponentDecl,
                      scope: ComponentScope) -> dict[str, m.PortDecl] | None:
        """Port map of a subcomponent with the instantiation's type arguments
        substituted in; None if the reference or arity is broken."""
        target = self.table.globals.get(sub.component_ref)
        if not isinstance(target, m.ComponentType):
            self.error("W11", f"unknown component '{sub.component_ref}'", scope.file, sub.pos)
            return None
        if len(sub.type_args) != len(target.type_params):
            self.error("W7", f"'{sub.component_ref}' takes {len(target.type_params)} type "
                             f"argument(s), got {len(sub.type_args)}", scope.file, sub.pos)
            return None
        for t in sub.type_args:
            self.resolve_type(t, scope, sub.pos)
        bind = dict(zip(target.type_params, sub.type_args))
        ports = {}
        for p in target.ports:
            t = p.type
            if isinstance(t, m.TypeParam) and t.name in bind:
                t = bind[t.name]
            ports[p.name] = m.PortDecl(p.name, p.direction, t, p.pos)
        return ports

    def check_sub_args(self, comp: m.ComponentType, sub: m.SubcomponentDecl,
                       scope: ComponentScope) -> None:
        target = self.table.globals.get(sub.component_ref)
        if not isinstance(target, m.ComponentType):
            return  # W11 already reported
        if len(sub.config_args) != len(target.config_params):
            self.error("W7", f"'{sub.component_ref}' takes {len(target.config_params)} config "
                             f"argument(s), got {len(sub.config_args)}", scope.file, sub.pos)
            return
        bind = dict(zip(target.type_params, sub.type_args))
        for (ptype, pname), arg in zip(target.config_params, sub.config_args):
            want = ptype
            if isinstance(want, m.TypeParam) and want.name in bind:
                want = bind[want.name]
            if isinstance(want, m.TypeParam):
                continue  # unresolvable without concrete binding
            got = self.type_of(arg, scope, vars_ok=False, ports_ok=False,
                               what=f"config argument '{pname}'")
            if got is not None and got != want:
                self.error("W7", f"config argument '{pname}' of '{sub.component_ref}' has type "
                                 f"{got}, expected {want}", scope.file, sub.pos)

    def check_connectors(self, comp: m.ComponentType, scope: ComponentScope,
                         interfaces: dict[str, dict[str, m.PortDecl] | None]) -> None:
        file = scope.file
        targets_seen: dict[str, m.Connector] = {}

        def endpoint_type(ref: m.PortRef, role: str) -> m.TypeExpr | None:
            if ref.instance is None:
                port = comp.port(ref.port)
                if port is None:
                    self.error("W11", f"component '{comp.name}' has no port '{ref.port}'", file, ref.pos)
                    return None
                if role == "source" and port.direction != "in":
                    self.error("W2", f"connector source '{ref}' must be a subcomponent out-port "
                                     "or an own in-port", file, ref.pos)
                    return None
                if role == "target" and port.direction != "out":
                    self.error("W3", f"connector target '{ref}' must be a subcomponent in-port "
                                     "or an own out-port", file, ref.pos)
                    return None
                return scope.port_types.get(ref.port, port.type)
            if scope.kinds.get(ref.instance) != "sub":
                self.error("W11", f"unknown subcomponent '{ref.instance}'", file, ref.pos)
                return None
            iface = interfaces.get(ref.instance)
            if iface is None:
                return None
            port = iface.get(ref.port)
            if port is None:
                self.error("W11", f"subcomponent '{ref.instance}' has no port '{ref.port}'", file, ref.pos)
                return None
            if role == "source" and port.direction != "out":
                self.error("W2", f"connector source '{ref}' must be a subcomponent out-port "
                                 "or an own in-port", file, ref.pos)
                return None
            if role == "target" and port.direction != "in":
                self.error("W3", f"connector target '{ref}' must be a subcomponent in-port "
                                 "or an own out-port", file, ref.pos)
                return None
            return port.type

        for conn in comp.connectors:
            st = endpoint_type(conn.source, "source")
            tt = endpoint_type(conn.target, "target")
            key = str(conn.target)
            if tt is not None:
                if key in targets_seen:
                    self.error("W4", f"port '{key}' already has a connector (fan-in is not allowed)",
                               file, conn.pos)
                else:
                    targets_seen[key] = conn
            if st is not None and tt is not None and st != tt:
                self.error("W5", f"connector type mismatch: '{conn.source}' is {st} but "
                                 f"'{conn.target}' is {tt}", file, conn.pos)

        # W4b: every legal target port should be fed by something.
        for sub in comp.subcomponents:
            iface = interfaces.get(sub.instance_name)
            if iface is None:
                continue
            for port in iface.values():
                if port.direction == "in" and f"{sub.instance_name}.{port.name}" not in targets_seen:
                    self.warn("W4b", f"in-port '{sub.instance_name}.{port.name}' is unconnected "
                                     "and will read the absence token every tick", file, sub.pos)
        for port in comp.ports:
            if port.direction == "out" and comp.is_composed and port.name not in targets_seen:
                self.warn("W4b", f"out-port '{port.name}' of '{comp.name}' is unconnected "
                                 "and will emit the absence token every tick", file, port.pos)

    # -- W10

    def check_recursion(self, order: list[str]) -> None:
        comps = self.table.components()
        refs = {name: sorted({s.component_ref for s in comps[name].subcomponents
                              if s.component_ref in comps})
                for name in comps}

        cyclic: set[str] = set()

        def reaches(start: str, goal: str, seen: set[str]) -> bool:
            for nxt in refs.get(start, ()):
                if nxt == goal:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    if reaches(nxt, goal, seen):
                        return True
            return False

        for name in order:
            if name in comps and reaches(name, name, set()):
                cyclic.add(name)
        for name in order:
            if name in cyclic:
                comp = comps[name]
                self.error("W10", f"component '{name}' instantiates itself (directly or indirectly)",
                           self.files.get(name, "<unknown>"), comp.pos)

    # -- driver

    def run(self, units: list[SourceUnit]) -> tuple[SymbolTable, list[Diagnostic]]:
        self.collect_globals(units)
        order: list[str] = []
        for unit in units:
            for comp in unit.components:
                if self.table.globals.get(comp.name) is not comp:
                    continue  # duplicate; first declaration wins
                order.append(comp.name)
                scope = self.build_scope(comp, unit.file)
                self.table.scopes[comp.name] = scope

                has_subs = bool(comp.subcomponents)
                has_behavior = bool(comp.behaviors)
                if len(comp.behaviors) > 1:
                    self.error("W8", f"component '{comp.name}' has more than one behavior",
                               unit.file, comp.pos)
                if has_subs and has_behavior:
                    self.error("W8", f"component '{comp.name}' mixes subcomponents with a behavior; "
                                     "a component is either composed or atomic", unit.file, comp.pos)
                if not has_subs and not has_behavior:
                    self.error("W8", f"component '{comp.name}' has neither subcomponents nor a "
                                     "behavior", unit.file, comp.pos)
                if not has_subs and comp.connectors:
                    self.error("W8", f"atomic component '{comp.name}' cannot contain connectors",
                               unit.file, comp.pos)

                interfaces = {}
                for sub in comp.subcomponents:
                    interfaces[sub.instance_name] = self.sub_interface(comp, sub, scope)
                    self.check_sub_args(comp, sub, scope)
                self.check_connectors(comp, scope, interfaces)
                for b in comp.behaviors:
                    self.check_behavior(comp, b, scope)
        self.check_recursion(order)
        self.diagnostics.sort(key=lambda d: d.sort_key())
        return self.table, self.diagnostics


def check(units: list[SourceUnit]) -> tuple[SymbolTable, list[Diagnostic]]:
    """Check parsed units against W1-W12; returns the symbol table and all
    diagnostics (errors and warnings), deterministically ordered."""
    return _Checker().run(units)


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diagnostics)
