// Generated by arckit 1.0.0 for model BumperBot -- do not edit.
//
// The synchronous scheduler. Per tick: pending outputs from the previous
// tick (or the initial outputs at tick 0) become visible and travel along
// the pre-resolved driver table, then every atomic component reads its
// inputs and computes the outputs for the next tick. Automata and rule
// tables fire their first matching entry in declaration order and stutter
// (keep state, emit nothing) when nothing matches; action blocks evaluate
// all right-hand sides against pre-tick variables, then assign left to
// right. Native components run a bound implementation one tick delayed, or
// replay a scripted schedule keyed by visible tick.

import { EvalError, Msg, Value } from "./values";
import { formatLine } from "./trace";

export type Vars = Record<string, Value>;
export type Ports = Record<string, Msg>;
export type ExprFn = (v: Vars, p: Ports) => Value;

export type Pattern =
  | { kind: "lit"; value: Value }
  | { kind: "wild" }
  | { kind: "absent" };

export interface TransitionDef {
  from: string;
  to: string;
  pattern: [string, Pattern][];
  guard: ExprFn | null;
  actions: [string, ExprFn | null][]; // null right-hand side = emit absence
}

export interface RuleDef {
  pattern: [string, Pattern][];
  guard: ExprFn | null;
  actions: [string, ExprFn | null][];
}

export interface NativeImpl {
  init(config: Record<string, Value>): unknown;
  react(state: unknown, inputs: Record<string, Msg>): [unknown, Record<string, Msg>];
}

export interface AutomatonDef {
  kind: "automaton";
  path: string;
  inPorts: string[];
  outPorts: string[];
  vars: [string, () => Value][];
  initialState: string;
  initialActions: [string, ExprFn | null][];
  transitions: TransitionDef[];
}

export interface RulesDef {
  kind: "rules";
  path: string;
  inPorts: string[];
  outPorts: string[];
  vars: [string, () => Value][];
  rules: RuleDef[];
}

export interface NativeDef {
  kind: "native";
  path: string;
  inPorts: string[];
  outPorts: string[];
  component: string;
  config: Record<string, Value>;
  makeImpl: () => NativeImpl;
}

export type AtomicDef = AutomatonDef | RulesDef | NativeDef;

export type Driver =
  | { kind: "producer"; path: string; port: string }
  | { kind: "env"; key: string } // key of the root in-port that feeds this port
  | { kind: "absent" };

export interface ModelDef {
  name: string;
  portKeys: string[];
  drivers: Record<string, Driver>;
  atomics: AtomicDef[];
  rootInPorts: string[]; // full keys
  nativeOuts: Record<string, [string, string]>; // full key -> [path, port]
}

type Schedule = Map<number, Map<string, Msg>>;

interface AtomicState {
  def: AtomicDef;
  stateName: string | null;
  vars: Vars;
  pending: Map<string, Msg>;
  impl: NativeImpl | null;
  implState: unknown;
  script: Schedule | null;
}

function valuesEqual(a: Value, b: Value): boolean {
  return typeof a === typeof b && a === b;
}

function matches(pattern: [string, Pattern][], inputs: Ports): boolean {
  for (const [port, pat] of pattern) {
    const msg = inputs[port] ?? null;
    if (pat.kind === "wild") {
      if (msg === null) {
        return false;
      }
    } else if (pat.kind === "absent") {
      if (msg !== null) {
        return false;
      }
    } else if (msg === null || !valuesEqual(msg, pat.value)) {
      return false;
    }
  }
  return true;
}

function evalIn(expr: ExprFn, v: Vars, p: Ports, path: string, tick: number | null): Value {
  try {
    return expr(v, p);
  } catch (e) {
    if (e instanceof EvalError) {
      throw e.withContext(path, tick);
    }
    throw e;
  }
}

function evalGuard(expr: ExprFn, v: Vars, p: Ports, path: string, tick: number | null): boolean {
  const value = evalIn(expr, v, p, path, tick);
  if (typeof value !== "boolean") {
    throw new EvalError("guard evaluated to a non-boolean value", path, tick);
  }
  return value;
}

function fire(
  st: AtomicState,
  actions: [string, ExprFn | null][],
  inputs: Ports,
  path: string,
  tick: number | null,
): void {
  const outSet = new Set(st.def.outPorts);
  const pending = new Map<string, Msg>();
  for (const port of st.def.outPorts) {
    pending.set(port, null);
  }
  const vars = { ...st.vars };
  const staged: [string, Msg][] = [];
  for (const [name, act] of actions) {
    staged.push([name, act === null ? null : evalIn(act, st.vars, inputs, path, tick)]);
  }
  for (const [name, value] of staged) {
    if (outSet.has(name)) {
      pending.set(name, value);
    } else if (!Object.prototype.hasOwnProperty.call(vars, name)) {
      throw new EvalError(`action targets unknown name '${name}'`, path, tick);
    } else if (value === null) {
      throw new EvalError(`variable '${name}' cannot be assigned the absence token`, path, tick);
    } else {
      vars[name] = value;
    }
  }
  st.pending = pending;
  st.vars = vars;
}

function stutter(st: AtomicState): void {
  const pending = new Map<string, Msg>();
  for (const port of st.def.outPorts) {
    pending.set(port, null);
  }
  st.pending = pending;
}

export function initAtomics(model: ModelDef, scripts: Map<string, Schedule>): Map<string, AtomicState> {
  const atomics = new Map<string, AtomicState>();
  for (const def of model.atomics) {
    const st: AtomicState = {
      def,
      stateName: null,
      vars: {},
      pending: new Map(),
      impl: null,
      implState: null,
      script: null,
    };
    for (const port of def.outPorts) {
      st.pending.set(port, null);
    }
    if (def.kind === "automaton" || def.kind === "rules") {
      for (const [name, init] of def.vars) {
        st.vars[name] = evalIn(() => init(), st.vars, {}, def.path, null);
      }
    }
    if (def.kind === "automaton") {
      st.stateName = def.initialState;
      if (def.initialActions.length > 0) {
        fire(st, def.initialActions, {}, def.path, null);
      }
    } else if (def.kind === "native") {
      const script = scripts.get(def.path);
      if (script !== undefined) {
        st.script = script;
        for (const [port, value] of (script.get(0) ?? new Map()).entries()) {
          if (st.pending.has(port)) {
            st.pending.set(port, value);
          }
        }
      } else {
        st.impl = def.makeImpl();
        st.implState = st.impl.init(def.config);
      }
    }
    atomics.set(def.path, st);
  }
  return atomics;
}

export function runModel(
  model: ModelDef,
  env: Schedule,
  scripts: Map<string, Schedule>,
  ticks: number,
): string[] {
  const atomics = initAtomics(model, scripts);
  const lines: string[] = [];

  for (let tick = 0; tick < ticks; tick++) {
    const visible = new Map<string, Msg>();
    for (const key of model.portKeys) {
      const driver = model.drivers[key];
      if (driver.kind === "producer") {
        const st = atomics.get(driver.path)!;
        visible.set(key, st.pending.get(driver.port) ?? null);
      } else if (driver.kind === "env") {
        visible.set(key, env.get(tick)?.get(driver.key) ?? null);
      } else {
        visible.set(key, null);
      }
    }
    lines.push(formatLine(tick, model.portKeys, visible));

    for (const def of model.atomics) {
      const st = atomics.get(def.path)!;
      const inputs: Ports = {};
      for (const port of def.inPorts) {
        inputs[port] = visible.get(`${def.path}.${port}`) ?? null;
      }
      if (def.kind === "automaton") {
        let fired: TransitionDef | null = null;
        for (const t of def.transitions) {
          if (t.from !== st.stateName || !matches(t.pattern, inputs)) {
            continue;
          }
          if (t.guard !== null && !evalGuard(t.guard, st.vars, inputs, def.path, tick)) {
            continue;
          }
          fired = t;
          break;
        }
        if (fired === null) {
          stutter(st);
        } else {
          fire(st, fired.actions, inputs, def.path, tick);
          st.stateName = fired.to;
        }
      } else if (def.kind === "rules") {
        let fired: RuleDef | null = null;
        for (const r of def.rules) {
          if (!matches(r.pattern, inputs)) {
            continue;
          }
          if (r.guard !== null && !evalGuard(r.guard, st.vars, inputs, def.path, tick)) {
            continue;
          }
          fired = r;
          break;
        }
        if (fired === null) {
          stutter(st);
        } else {
          fire(st, fired.actions, inputs, def.path, tick);
        }
      } else {
        if (st.script !== null) {
          const pending = new Map<string, Msg>();
          for (const port of def.outPorts) {
            pending.set(port, null);
          }
          for (const [port, value] of (st.script.get(tick + 1) ?? new Map()).entries()) {
            if (pending.has(port)) {
              pending.set(port, value);
            }
          }
          st.pending = pending;
        } else {
          let outputs: Record<string, Msg>;
          try {
            [st.implState, outputs] = st.impl!.react(st.implState, inputs);
          } catch (e) {
            if (e instanceof EvalError) {
              throw e.withContext(def.path, tick);
            }
            throw e;
          }
          const pending = new Map<string, Msg>();
          for (const port of def.outPorts) {
            pending.set(port, null);
          }
          for (const [port, value] of Object.entries(outputs)) {
            if (!pending.has(port)) {
              throw new EvalError(`native output addresses unknown out-port '${port}'`, def.path, tick);
            }
            pending.set(port, value);
          }
          st.pending = pending;
        }
      }
    }
  }
  return lines;
}
