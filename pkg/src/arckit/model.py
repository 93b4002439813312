"""Abstract syntax and instance model for the architecture language.

Components are declared once and instantiated many times; a definition is
either atomic (it carries a behavior: an automaton, a rule table, or a native
marker) or composed (it carries subcomponents and connectors). ``substitute``
resolves one definition against concrete type/config arguments, and
``elaborate`` unfolds a whole definition library into an instance tree that
the simulator and the code generators consume.

Every value here is immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from .errors import ArityMismatch, EvalError, TypeMismatch, UnresolvedReference

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

# A message is one tick's content of a port: a value, or None for the
# absence token (spelled `--` in source text, null in trace files).
Value = Union[bool, int, str]
Message = Union[bool, int, str, None]


@dataclass(frozen=True)
class Pos:
    line: int
    column: int


# --------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Primitive:
    kind: str  # "Boolean" | "Integer" | "String"

    def __str__(self) -> str:
        return self.kind


@dataclass(frozen=True)
class EnumRef:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TypeParam:
    name: str

    def __str__(self) -> str:
        return self.name


TypeExpr = Union[Primitive, EnumRef, TypeParam]

BOOLEAN = Primitive("Boolean")
INTEGER = Primitive("Integer")
STRING = Primitive("String")


# --------------------------------------------------------------------------
# Expressions

# `Name` covers every bare identifier in expression position: a variable, a
# config parameter, an in-port read, or an enum value. The parser cannot
# tell these apart; the checker resolves them and elaboration folds config
# references away.


@dataclass(frozen=True)
class Lit:
    value: Value
    kind: str  # "Boolean" | "Integer" | "String"
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Name:
    ident: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Arith:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Cmp:
    op: str  # == != < <= > >=
    left: "Expr"
    right: "Expr"
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class BoolOp:
    op: str  # "and" | "or" | "not"
    left: "Expr"
    right: "Expr | None" = None  # None for "not"
    pos: Pos | None = field(default=None, compare=False)


Expr = Union[Lit, Name, Arith, Cmp, BoolOp]


@dataclass(frozen=True)
class AbsentOut:
    """Explicit `--` on the right-hand side of an action: emit no message."""

    pos: Pos | None = field(default=None, compare=False)


Action = Union[Expr, AbsentOut]


# --------------------------------------------------------------------------
# Patterns


@dataclass(frozen=True)
class LitPattern:
    # Restricted by the grammar to a literal or an enum value name.
    value: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Wildcard:
    """Matches any present message."""

    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AbsentPattern:
    """Matches only the absence token."""

    pos: Pos | None = field(default=None, compare=False)


Pattern = Union[LitPattern, Wildcard, AbsentPattern]


# --------------------------------------------------------------------------
# Declarations


@dataclass(frozen=True)
class EnumDecl:
    name: str
    values: tuple[str, ...]
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class PortDecl:
    name: str
    direction: str  # "in" | "out"
    type: TypeExpr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: TypeExpr
    init: Expr
    pos: Pos | None = field(default=None, compare=False)


# Action blocks are stored in source order; a left-hand name resolves to an
# out-port first and a variable second (the checker rejects anything else).


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    pattern: tuple[tuple[str, Pattern], ...]
    guard: Expr | None
    actions: tuple[tuple[str, Action], ...]
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Automaton:
    variables: tuple[VarDecl, ...]
    states: tuple[str, ...]
    initial_state: str
    initial_outputs: tuple[tuple[str, Action], ...]
    transitions: tuple[Transition, ...]
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Rule:
    pattern: tuple[tuple[str, Pattern], ...]
    guard: Expr | None
    actions: tuple[tuple[str, Action], ...]
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RuleTable:
    variables: tuple[VarDecl, ...]
    rules: tuple[Rule, ...]
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Native:
    """Behavior supplied by a bound implementation, not by the model."""

    pos: Pos | None = field(default=None, compare=False)


Behavior = Union[Automaton, RuleTable, Native]


@dataclass(frozen=True)
class PortRef:
    instance: str | None  # None = the enclosing component's own port
    port: str
    pos: Pos | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return self.port if self.instance is None else f"{self.instance}.{self.port}"


@dataclass(frozen=True)
class Connector:
    source: PortRef
    target: PortRef
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SubcomponentDecl:
    instance_name: str
    component_ref: str
    type_args: tuple[TypeExpr, ...] = ()
    config_args: tuple[Expr, ...] = ()
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ComponentType:
    """A component definition.

    A well-formed definition has exactly one body kind: either subcomponents
    (plus connectors) or a single behavior. The parser stores whatever the
    source said; the checker enforces the exactly-one rule (W8).
    """

    name: str
    type_params: tuple[str, ...] = ()
    config_params: tuple[tuple[TypeExpr, str], ...] = ()
    ports: tuple[PortDecl, ...] = ()
    subcomponents: tuple[SubcomponentDecl, ...] = ()
    connectors: tuple[Connector, ...] = ()
    behaviors: tuple[Behavior, ...] = ()
    pos: Pos | None = field(default=None, compare=False)

    @property
    def is_atomic(self) -> bool:
        return len(self.behaviors) == 1 and not self.subcomponents

    @property
    def is_composed(self) -> bool:
        return bool(self.subcomponents) and not self.behaviors

    @property
    def behavior(self) -> Behavior:
        return self.behaviors[0]

    def port(self, name: str) -> PortDecl | None:
        for p in self.ports:
            if p.name == name:
                return p
        return None

    def in_ports(self) -> tuple[PortDecl, ...]:
        return tuple(p for p in self.ports if p.direction == "in")

    def out_ports(self) -> tuple[PortDecl, ...]:
        return tuple(p for p in self.ports if p.direction == "out")


# --------------------------------------------------------------------------
# Expression evaluation
#
# Integers are signed 64-bit with checked arithmetic: any intermediate
# result outside [INT_MIN, INT_MAX] raises EvalError instead of wrapping.
# Division truncates toward zero; dividing by zero is an error.


@dataclass(frozen=True)
class EvalEnv:
    variables: Mapping[str, Value] = field(default_factory=dict)
    configs: Mapping[str, Value] = field(default_factory=dict)
    ports: Mapping[str, Message] = field(default_factory=dict)
    enum_values: frozenset[str] = frozenset()


def check_int(n: int) -> int:
    if n < INT_MIN or n > INT_MAX:
        raise EvalError(f"integer overflow: {n}")
    return n


def values_equal(a: Value, b: Value) -> bool:
    """Equality that keeps Boolean and Integer apart (True is not 1 here)."""
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    return a == b


def eval_expr(expr: Expr, env: EvalEnv) -> Value:
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Name):
        ident = expr.ident
        if ident in env.variables:
            return env.variables[ident]
        if ident in env.configs:
            return env.configs[ident]
        if ident in env.ports:
            msg = env.ports[ident]
            if msg is None:
                raise EvalError(f"read of absent message on port '{ident}'")
            return msg
        if ident in env.enum_values:
            return ident
        raise EvalError(f"unresolved name '{ident}'")
    if isinstance(expr, Arith):
        a = eval_expr(expr.left, env)
        b = eval_expr(expr.right, env)
        if not isinstance(a, int) or not isinstance(b, int) or isinstance(a, bool) or isinstance(b, bool):
            raise EvalError(f"arithmetic on non-integer operands ({expr.op})")
        if expr.op == "+":
            return check_int(a + b)
        if expr.op == "-":
            return check_int(a - b)
        if expr.op == "*":
            return check_int(a * b)
        if expr.op == "/":
            if b == 0:
                raise EvalError("division by zero")
            q = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                q = -q
            return check_int(q)
        raise EvalError(f"unknown arithmetic operator '{expr.op}'")
    if isinstance(expr, Cmp):
        a = eval_expr(expr.left, env)
        b = eval_expr(expr.right, env)
        if expr.op == "==":
            return values_equal(a, b)
        if expr.op == "!=":
            return not values_equal(a, b)
        if not isinstance(a, int) or not isinstance(b, int) or isinstance(a, bool) or isinstance(b, bool):
            raise EvalError(f"ordering comparison on non-integer operands ({expr.op})")
        if expr.op == "<":
            return a < b
        if expr.op == "<=":
            return a <= b
        if expr.op == ">":
            return a > b
        if expr.op == ">=":
            return a >= b
        raise EvalError(f"unknown comparison operator '{expr.op}'")
    if isinstance(expr, BoolOp):
        a = eval_expr(expr.left, env)
        if not isinstance(a, bool):
            raise EvalError(f"boolean operator '{expr.op}' on non-boolean operand")
        if expr.op == "not":
            return not a
        if expr.op == "and":
            if not a:
                return False
            b = eval_expr(expr.right, env)
        elif expr.op == "or":
            if a:
                return True
            b = eval_expr(expr.right, env)
        else:
            raise EvalError(f"unknown boolean operator '{expr.op}'")
        if not isinstance(b, bool):
            raise EvalError(f"boolean operator '{expr.op}' on non-boolean operand")
        return b
    raise EvalError(f"cannot evaluate {type(expr).__name__}")


def eval_const(expr: Expr, configs: Mapping[str, Value], enum_values: frozenset[str]) -> Value:
    """Evaluate a constant expression: literals, enum values, bound configs."""
    return eval_expr(expr, EvalEnv(configs=configs, enum_values=enum_values))


# --------------------------------------------------------------------------
# Substitution


def _subst_type(t: TypeExpr, bindings: Mapping[str, TypeExpr]) -> TypeExpr:
    if isinstance(t, TypeParam) and t.name in bindings:
        return bindings[t.name]
    return t


def _lit_for(value: Value, pos: Pos | None = None) -> Expr:
    if isinstance(value, bool):
        return Lit(value, "Boolean", pos)
    if isinstance(value, int):
        return Lit(value, "Integer", pos)
    # Enum values and strings fold the same way; the checker has already
    # guaranteed the expression is type-correct, evaluation only needs the
    # runtime value.
    return Lit(value, "String", pos)


def _fold_expr(expr: Expr, configs: Mapping[str, Value], enum_values: frozenset[str],
               locals_: frozenset[str]) -> Expr:
    if isinstance(expr, Lit):
        return expr
    if isinstance(expr, Name):
        if expr.ident in configs:
            return _lit_for(configs[expr.ident], expr.pos)
        if expr.ident not in locals_ and expr.ident in enum_values:
            return _lit_for(expr.ident, expr.pos)
        return expr
    if isinstance(expr, Arith):
        return Arith(expr.op, _fold_expr(expr.left, configs, enum_values, locals_),
                     _fold_expr(expr.right, configs, enum_values, locals_), expr.pos)
    if isinstance(expr, Cmp):
        return Cmp(expr.op, _fold_expr(expr.left, configs, enum_values, locals_),
                   _fold_expr(expr.right, configs, enum_values, locals_), expr.pos)
    if isinstance(expr, BoolOp):
        right = None if expr.right is None else _fold_expr(expr.right, configs, enum_values, locals_)
        return BoolOp(expr.op, _fold_expr(expr.left, configs, enum_values, locals_), right, expr.pos)
    return expr


def _subst_behavior(b: Behavior, tbind: Mapping[str, TypeExpr],
                    configs: Mapping[str, Value], enum_values: frozenset[str],
                    in_ports: frozenset[str]) -> Behavior:
    # Local names (behavior variables and readable ports) shadow enum values;
    # everything else that names an enum value folds to its constant.
    locals_ = in_ports
    if isinstance(b, (Automaton, RuleTable)):
        locals_ = in_ports | frozenset(v.name for v in b.variables)

    def fold_e(e: Expr) -> Expr:
        return _fold_expr(e, configs, enum_values, locals_)

    def fold_acts(acts: tuple[tuple[str, Action], ...]) -> tuple[tuple[str, Action], ...]:
        return tuple((n, a if isinstance(a, AbsentOut) else fold_e(a)) for n, a in acts)

    def fold_pats(pats: tuple[tuple[str, Pattern], ...]) -> tuple[tuple[str, Pattern], ...]:
        return tuple((n, LitPattern(fold_e(p.value), p.pos) if isinstance(p, LitPattern) else p)
                     for n, p in pats)

    def fold_vars(vs: tuple[VarDecl, ...]) -> tuple[VarDecl, ...]:
        return tuple(VarDecl(v.name, _subst_type(v.type, tbind), fold_e(v.init), v.pos) for v in vs)

    if isinstance(b, Automaton):
        return Automaton(
            variables=fold_vars(b.variables),
            states=b.states,
            initial_state=b.initial_state,
            initial_outputs=fold_acts(b.initial_outputs),
            transitions=tuple(
                Transition(t.source, t.target, fold_pats(t.pattern),
                           None if t.guard is None else fold_e(t.guard),
                           fold_acts(t.actions), t.pos)
                for t in b.transitions),
            pos=b.pos)
    if isinstance(b, RuleTable):
        return RuleTable(
            variables=fold_vars(b.variables),
            rules=tuple(
                Rule(fold_pats(r.pattern),
                     None if r.guard is None else fold_e(r.guard),
                     fold_acts(r.actions), r.pos)
                for r in b.rules),
            pos=b.pos)
    return b


def value_conforms(value: Message, t: TypeExpr, enums: Mapping[str, EnumDecl]) -> bool:
    """Whether a present value inhabits a type (None never conforms)."""
    if value is None:
        return False
    if t == BOOLEAN:
        return isinstance(value, bool)
    if t == INTEGER:
        return isinstance(value, int) and not isinstance(value, bool) and INT_MIN <= value <= INT_MAX
    if t == STRING:
        return isinstance(value, str)
    if isinstance(t, EnumRef):
        decl = enums.get(t.name)
        return decl is not None and isinstance(value, str) and value in decl.values
    return False


def substitute(defn: ComponentType, type_args: tuple[TypeExpr, ...] | list,
               config_args: tuple[Expr, ...] | list,
               enums: Mapping[str, EnumDecl] | None = None,
               outer_configs: Mapping[str, Value] | None = None) -> ComponentType:
    """Resolve a definition against concrete type and config arguments.

    Returns a copy with every type parameter replaced and every config
    reference folded to its bound constant; the input definition is not
    modified. ``outer_configs`` supplies constants for config argument
    expressions written in terms of an enclosing component's parameters.
    """
    resolved, _ = substitute_bound(defn, type_args, config_args, enums, outer_configs)
    return resolved


def substitute_bound(defn: ComponentType, type_args: tuple[TypeExpr, ...] | list,
                     config_args: tuple[Expr, ...] | list,
                     enums: Mapping[str, EnumDecl] | None = None,
                     outer_configs: Mapping[str, Value] | None = None,
                     ) -> tuple[ComponentType, dict[str, Value]]:
    """Like ``substitute`` but also returns the bound config values."""
    enums = enums or {}
    enum_values = frozenset(v for e in enums.values() for v in e.values)
    type_args = tuple(type_args)
    config_args = tuple(config_args)

    if len(type_args) != len(defn.type_params):
        raise ArityMismatch(
            f"{defn.name}: expected {len(defn.type_params)} type argument(s), got {len(type_args)}")
    if len(config_args) != len(defn.config_params):
        raise ArityMismatch(
            f"{defn.name}: expected {len(defn.config_params)} config argument(s), got {len(config_args)}")

    tbind = dict(zip(defn.type_params, type_args))

    configs: dict[str, Value] = {}
    for (ptype, pname), arg in zip(defn.config_params, config_args):
        try:
            value = eval_const(arg, dict(outer_configs or {}), enum_values)
        except EvalError as e:
            raise TypeMismatch(f"{defn.name}.{pname}: config argument is not constant ({e.reason})")
        want = _subst_type(ptype, tbind)
        if not value_conforms(value, want, enums):
            raise TypeMismatch(f"{defn.name}.{pname}: value {value!r} does not conform to {want}")
        configs[pname] = value

    resolved = ComponentType(
        name=defn.name,
        type_params=(),
        config_params=(),
        ports=tuple(PortDecl(p.name, p.direction, _subst_type(p.type, tbind), p.pos) for p in defn.ports),
        subcomponents=tuple(
            SubcomponentDecl(
                s.instance_name, s.component_ref,
                tuple(_subst_type(t, tbind) for t in s.type_args),
                tuple(_fold_expr(a, configs, enum_values, frozenset()) for a in s.config_args),
                s.pos)
            for s in defn.subcomponents),
        connectors=defn.connectors,
        behaviors=tuple(
            _subst_behavior(b, tbind, configs, frozenset(),
                            frozenset(p.name for p in defn.ports if p.direction == "in"))
            for b in defn.behaviors),
        pos=defn.pos,
    )
    return resolved, configs


def resolve_enum_values(behavior: Behavior, enums: Mapping[str, EnumDecl],
                        in_ports: frozenset[str]) -> Behavior:
    """Fold bare enum-value names in a behavior to constants. Local names
    (variables, readable ports) shadow enum values. Elaboration applies this
    so instance models evaluate without the enum library."""
    enum_values = frozenset(v for e in enums.values() for v in e.values)
    return _subst_behavior(behavior, {}, {}, enum_values, in_ports)


# --------------------------------------------------------------------------
# Instance model


@dataclass(frozen=True)
class InstanceNode:
    path: str
    instance_name: str
    definition: str
    ports: tuple[PortDecl, ...]
    config: tuple[tuple[str, Value], ...] = ()
    children: tuple["InstanceNode", ...] = ()
    connectors: tuple[Connector, ...] = ()
    behavior: Behavior | None = None

    @property
    def is_atomic(self) -> bool:
        return self.behavior is not None

    def port(self, name: str) -> PortDecl | None:
        for p in self.ports:
            if p.name == name:
                return p
        return None

    def child(self, instance_name: str) -> "InstanceNode | None":
        for c in self.children:
            if c.instance_name == instance_name:
                return c
        return None

    def walk(self) -> Iterator["InstanceNode"]:
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass(frozen=True)
class InstanceModel:
    root: InstanceNode

    def nodes(self) -> Iterator[InstanceNode]:
        return self.root.walk()

    def node_at(self, path: str) -> InstanceNode | None:
        for n in self.nodes():
            if n.path == path:
                return n
        return None


def root_instance_name(component_name: str) -> str:
    return component_name[:1].lower() + component_name[1:]


def _component_library(library: Mapping[str, object]) -> dict[str, ComponentType]:
    return {k: v for k, v in library.items() if isinstance(v, ComponentType)}


def _enum_library(library: Mapping[str, object]) -> dict[str, EnumDecl]:
    return {k: v for k, v in library.items() if isinstance(v, EnumDecl)}


def elaborate(root: ComponentType, library: Mapping[str, object]) -> InstanceModel:
    """Unfold a checked definition into the full instance tree.

    ``library`` maps names to definitions (components and enums may share the
    map; a checker symbol table's global scope works directly). Two
    subcomponents referencing one definition get distinct nodes with distinct
    dotted paths.
    """
    comps = _component_library(library)
    enums = _enum_library(library)

    def build(defn: ComponentType, configs: Mapping[str, Value],
              path: str, instance_name: str) -> InstanceNode:
        children = []
        for sub in defn.subcomponents:
            target = comps.get(sub.component_ref)
            if target is None:
                raise UnresolvedReference(
                    f"'{path}.{sub.instance_name}': unknown component '{sub.component_ref}'")
            resolved, bound = substitute_bound(target, sub.type_args, sub.config_args,
                                               enums=enums, outer_configs=configs)
            children.append(build(resolved, bound, f"{path}.{sub.instance_name}", sub.instance_name))
        behavior = None
        if defn.is_atomic:
            in_ports = frozenset(p.name for p in defn.ports if p.direction == "in")
            behavior = resolve_enum_values(defn.behavior, enums, in_ports)
        return InstanceNode(
            path=path,
            instance_name=instance_name,
            definition=defn.name,
            ports=defn.ports,
            config=tuple(sorted(configs.items())),
            children=tuple(children),
            connectors=defn.connectors,
            behavior=behavior,
        )

    name = root_instance_name(root.name)
    resolved, bound = substitute_bound(root, (), (), enums=enums)
    return InstanceModel(build(resolved, bound, name, name))
