"""Deterministic time-synchronous execution of instance models.

Semantics, in one paragraph: time advances in discrete ticks and every port
carries exactly one message per tick (a value or the absence token). At tick
t, each component's pending outputs (computed during tick t-1, or the
initial outputs at tick 0) become visible and are delivered instantaneously
along connectors, together with environment values injected at the root's
in-ports. Every atomic component then reads its delivered inputs and
computes the outputs that become visible at t+1 -- one tick of delay per
component, none per connector, which gives arbitrary topologies (including
cycles through components) a unique meaning.

Automata fire the first transition in declaration order whose source state,
input pattern and guard all match; rule tables fire the first matching rule.
No match means stutter: state and variables stay, all outputs are absent.
Action blocks evaluate every right-hand side against pre-tick variable
values and then assign left to right. Native components either call a bound
implementation's ``react`` (unit-delayed like everything else) or replay a
scripted schedule keyed by visible tick.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import EvalError, InitEvalError, MissingBinding
from .model import (
    AbsentOut, AbsentPattern, Automaton, EnumDecl, EnumRef, EvalEnv, InstanceModel,
    InstanceNode, LitPattern, Message, Native, Pattern, RuleTable, TypeExpr, Value,
    Wildcard, eval_expr, value_conforms, values_equal,
)
from .trace import Trace
from .wiring import ABSENT, ENV, PRODUCER, PortTable, build_port_table


class NativeImpl:
    """Contract for bound native behavior.

    ``init`` turns the instance's config values into private state;
    ``react`` maps that state plus one tick's inputs to new state and the
    outputs for the next tick. Implementations used in tests must be
    deterministic. Output ports that are not mentioned emit the absence
    token.
    """

    def init(self, config: Mapping[str, Value]) -> object:
        return None

    def react(self, state: object, inputs: Mapping[str, Message]
              ) -> tuple[object, Mapping[str, Message]]:
        return state, {}


class ScriptedStub(NativeImpl):
    """Replays a prerecorded output schedule: at tick t the instance's
    out-ports show exactly ``schedule[t]`` (unlisted ticks and ports are
    absent). The drop-in test double for any native component."""

    def __init__(self, schedule: Mapping[int, Mapping[str, Message]]):
        self.schedule: dict[int, dict[str, Message]] = {
            int(t): dict(row) for t, row in schedule.items()}

    def outputs_at(self, tick: int) -> dict[str, Message]:
        return self.schedule.get(tick, {})


@dataclass
class _AtomicRt:
    node: InstanceNode
    out_ports: tuple[str, ...]
    in_ports: tuple[str, ...]
    pending: dict[str, Message]
    state_name: str | None = None
    variables: dict[str, Value] = field(default_factory=dict)
    impl: NativeImpl | None = None
    impl_state: object = None


@dataclass
class RuntimeState:
    model: InstanceModel
    table: PortTable
    atomics: dict[str, _AtomicRt]
    enum_values: frozenset[str]
    enum_decls: dict[str, EnumDecl]
    tick: int = 0

    def snapshot(self, path: str) -> dict:
        rt = self.atomics[path]
        return {"state": rt.state_name, "variables": dict(rt.variables),
                "pending": dict(rt.pending)}


def _port_value_ok(value: Message, t: TypeExpr, enum_decls: Mapping[str, EnumDecl]) -> bool:
    if value is None:
        return True
    if isinstance(t, EnumRef) and t.name not in enum_decls:
        # Enum library not supplied: membership cannot be checked, accept any string.
        return isinstance(value, str)
    return value_conforms(value, t, enum_decls)


def _eval(expr, env: EvalEnv, path: str, tick: int | None) -> Value:
    try:
        return eval_expr(expr, env)
    except EvalError as e:
        raise e.with_context(path, tick) from None


def _guard(expr, env: EvalEnv, path: str, tick: int | None) -> bool:
    value = _eval(expr, env, path, tick)
    if not isinstance(value, bool):
        raise EvalError("guard evaluated to a non-boolean value", path, tick)
    return value


def _matches(pattern: Sequence[tuple[str, Pattern]], inputs: Mapping[str, Message],
             const_env: EvalEnv, path: str, tick: int | None) -> bool:
    for port, pat in pattern:
        msg = inputs.get(port)
        if isinstance(pat, Wildcard):
            if msg is None:
                return False
        elif isinstance(pat, AbsentPattern):
            if msg is not None:
                return False
        elif isinstance(pat, LitPattern):
            want = _eval(pat.value, const_env, path, tick)
            if msg is None or not values_equal(msg, want):
                return False
    return True


def _fire(rt: _AtomicRt, actions, env: EvalEnv, enum_decls, path: str, tick: int | None,
          ) -> tuple[dict[str, Message], dict[str, Value]]:
    """Evaluate one action block: all right-hand sides see pre-tick variable
    values, assignments apply left to right. Returns (pending, variables)."""
    pending: dict[str, Message] = {p: None for p in rt.out_ports}
    variables = dict(rt.variables)
    staged: list[tuple[str, Message]] = []
    for name, act in actions:
        value = None if isinstance(act, AbsentOut) else _eval(act, env, path, tick)
        staged.append((name, value))
    for name, value in staged:
        if name in pending:
            port = rt.node.port(name)
            if not _port_value_ok(value, port.type, enum_decls):
                raise EvalError(f"value {value!r} does not conform to port '{name}' "
                                f"({port.type})", path, tick)
            pending[name] = value
        elif name in variables:
            if value is None:
                raise EvalError(f"variable '{name}' cannot be assigned the absence token",
                                path, tick)
            variables[name] = value
        else:
            raise EvalError(f"action targets unknown name '{name}'", path, tick)
    return pending, variables


def init_runtime(model: InstanceModel, bindings: Mapping[str, NativeImpl] | None = None,
                 enums: Mapping[str, object] | None = None) -> RuntimeState:
    """Set up tick 0: automata in their initial state with initial outputs
    pending, rule tables with init-valued variables and all-absent outputs,
    natives bound to an implementation.

    A native instance without out-ports needs no binding (its inputs are
    simply consumed); any other unbound native raises MissingBinding.
    """
    bindings = dict(bindings or {})
    enum_decls = {k: v for k, v in (enums or {}).items() if isinstance(v, EnumDecl)}
    enum_values = frozenset(v for e in enum_decls.values() for v in e.values)

    table = build_port_table(model)
    atomics: dict[str, _AtomicRt] = {}
    for node in model.nodes():
        if node.behavior is None:
            continue
        rt = _AtomicRt(
            node=node,
            out_ports=tuple(p.name for p in node.ports if p.direction == "out"),
            in_ports=tuple(p.name for p in node.ports if p.direction == "in"),
            pending={p.name: None for p in node.ports if p.direction == "out"},
        )
        b = node.behavior
        configs = dict(node.config)
        if isinstance(b, (Automaton, RuleTable)):
            env = EvalEnv(variables={}, configs=configs, enum_values=enum_values)
            for v in b.variables:
                try:
                    rt.variables[v.name] = eval_expr(v.init, env)
                except EvalError as e:
                    raise InitEvalError(f"initializing '{v.name}': {e.reason}",
                                        node.path, None) from None
                env = EvalEnv(variables=rt.variables, configs=configs, enum_values=enum_values)
        if isinstance(b, Automaton):
            rt.state_name = b.initial_state
            if b.initial_outputs:
                env = EvalEnv(variables=rt.variables, configs=configs, enum_values=enum_values)
                try:
                    rt.pending, rt.variables = _fire(rt, b.initial_outputs, env, enum_decls,
                                                     node.path, None)
                except EvalError as e:
                    raise InitEvalError(e.reason, node.path, None) from None
        elif isinstance(b, Native):
            impl = bindings.get(node.path)
            if impl is None:
                if rt.out_ports:
                    raise MissingBinding(node.path)
                impl = NativeImpl()
            if isinstance(impl, ScriptedStub):
                for row in impl.schedule.values():
                    for port, value in row.items():
                        if port not in rt.out_ports:
                            raise InitEvalError(
                                f"stub schedule addresses '{port}', which is not an out-port "
                                f"of '{node.definition}'", node.path, None)
                        if not _port_value_ok(value, node.port(port).type, enum_decls):
                            raise InitEvalError(
                                f"stub value {value!r} does not conform to port '{port}' "
                                f"({node.port(port).type})", node.path, None)
                rt.pending.update(impl.outputs_at(0))
            else:
                rt.impl_state = impl.init(configs)
            rt.impl = impl
        atomics[node.path] = rt
    return RuntimeState(model=model, table=table, atomics=atomics,
                        enum_values=enum_values, enum_decls=enum_decls)


def step(state: RuntimeState, env_row: Mapping[str, Message] | None = None,
         ) -> tuple[RuntimeState, dict[str, Message]]:
    """Execute one synchronous tick; returns the visible message on every
    port of every instance at this tick (the trace row)."""
    env_row = env_row or {}
    tick = state.tick
    enum_decls = state.enum_decls
    row: dict[str, Message] = {}
    for key in state.table.keys:
        driver = state.table.drivers[key]
        if driver.kind == PRODUCER:
            row[key] = state.atomics[driver.path].pending.get(driver.port)
        elif driver.kind == ENV:
            value = env_row.get(driver.key)
            if not _port_value_ok(value, state.table.decls[driver.key].type, enum_decls):
                raise EvalError(f"environment value {value!r} does not conform to "
                                f"port '{driver.key}'", driver.path, tick)
            row[key] = value
        else:
            row[key] = None

    for path, rt in state.atomics.items():
        inputs = {p: row[f"{path}.{p}"] for p in rt.in_ports}
        b = rt.node.behavior
        configs = dict(rt.node.config)
        if isinstance(b, Automaton):
            env = EvalEnv(variables=rt.variables, configs=configs, ports=inputs,
                          enum_values=state.enum_values)
            fired = None
            for t in b.transitions:
                if t.source != rt.state_name:
                    continue
                if not _matches(t.pattern, inputs, env, path, tick):
                    continue
                if t.guard is not None and not _guard(t.guard, env, path, tick):
                    continue
                fired = t
                break
            if fired is None:
                rt.pending = {p: None for p in rt.out_ports}  # stutter
            else:
                rt.pending, rt.variables = _fire(rt, fired.actions, env, enum_decls, path, tick)
                rt.state_name = fired.target
        elif isinstance(b, RuleTable):
            env = EvalEnv(variables=rt.variables, configs=configs, ports=inputs,
                          enum_values=state.enum_values)
            fired = None
            for r in b.rules:
                if not _matches(r.pattern, inputs, env, path, tick):
                    continue
                if r.guard is not None and not _guard(r.guard, env, path, tick):
                    continue
                fired = r
                break
            if fired is None:
                rt.pending = {p: None for p in rt.out_ports}
            else:
                rt.pending, rt.variables = _fire(rt, fired.actions, env, enum_decls, path, tick)
        else:  # native
            if isinstance(rt.impl, ScriptedStub):
                nxt = {p: None for p in rt.out_ports}
                nxt.update(rt.impl.outputs_at(tick + 1))
                rt.pending = nxt
            else:
                try:
                    rt.impl_state, outputs = rt.impl.react(rt.impl_state, dict(inputs))
                except EvalError as e:
                    raise e.with_context(path, tick) from None
                nxt = {p: None for p in rt.out_ports}
                for port, value in dict(outputs).items():
                    if port not in nxt:
                        raise EvalError(f"native output addresses unknown out-port '{port}'",
                                        path, tick)
                    if not _port_value_ok(value, rt.node.port(port).type, enum_decls):
                        raise EvalError(f"native value {value!r} does not conform to "
                                        f"port '{port}'", path, tick)
                    nxt[port] = value
                rt.pending = nxt

    state.tick += 1
    return state, row


def run(model: InstanceModel, bindings: Mapping[str, NativeImpl] | None = None,
        env: Sequence[Mapping[str, Message]] | Mapping[int, Mapping[str, Message]] | None = None,
        ticks: int = 0, enums: Mapping[str, object] | None = None) -> Trace:
    """Batch driver: initialize, step ``ticks`` times, and collect the full
    trace (every port of every instance). ``env`` rows are keyed by full
    port key (``<rootPath>.<port>``); a sequence must cover every tick."""
    if isinstance(env, Sequence):
        if len(env) < ticks:
            raise ValueError(f"environment trace has {len(env)} rows, need {ticks}")
        env_rows = {t: env[t] for t in range(ticks)}
    else:
        env_rows = dict(env or {})
    state = init_runtime(model, bindings, enums)
    rows = []
    for t in range(ticks):
        state, row = step(state, env_rows.get(t))
        rows.append(row)
    return Trace(state.table.keys, tuple(rows))
