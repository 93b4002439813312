// Generated by arckit 1.0.0 for model BumperBot -- do not edit.
//
// Message values and checked 64-bit integer arithmetic. Integers are BigInt
// end to end so the full signed 64-bit range survives arithmetic and trace
// serialization; null is the absence token.

export type Value = boolean | bigint | string;
export type Msg = Value | null;

export class EvalError extends Error {
  constructor(
    public reason: string,
    public path: string | null = null,
    public tick: number | null = null,
  ) {
    super(
      reason +
        (path !== null ? ` in '${path}'` : "") +
        (tick !== null ? ` at tick ${tick}` : ""),
    );
  }

  withContext(path: string, tick: number | null): EvalError {
    return new EvalError(this.reason, path, tick);
  }
}

export const INT_MIN = -(2n ** 63n);
export const INT_MAX = 2n ** 63n - 1n;

function checkInt(n: bigint): bigint {
  if (n < INT_MIN || n > INT_MAX) {
    throw new EvalError(`integer overflow: ${n}`);
  }
  return n;
}

function asInt(x: Value, op: string): bigint {
  if (typeof x !== "bigint") {
    throw new EvalError(`arithmetic on non-integer operands (${op})`);
  }
  return x;
}

export function iadd(a: Value, b: Value): bigint {
  return checkInt(asInt(a, "+") + asInt(b, "+"));
}

export function isub(a: Value, b: Value): bigint {
  return checkInt(asInt(a, "-") - asInt(b, "-"));
}

export function imul(a: Value, b: Value): bigint {
  return checkInt(asInt(a, "*") * asInt(b, "*"));
}

export function idiv(a: Value, b: Value): bigint {
  const x = asInt(a, "/");
  const y = asInt(b, "/");
  if (y === 0n) {
    throw new EvalError("division by zero");
  }
  return checkInt(x / y); // BigInt division truncates toward zero
}

export function veq(a: Value, b: Value): boolean {
  return typeof a === typeof b && a === b;
}

export function vne(a: Value, b: Value): boolean {
  return !veq(a, b);
}

function cmpInts(a: Value, b: Value, op: string): [bigint, bigint] {
  if (typeof a !== "bigint" || typeof b !== "bigint") {
    throw new EvalError(`ordering comparison on non-integer operands (${op})`);
  }
  return [a, b];
}

export function ilt(a: Value, b: Value): boolean {
  const [x, y] = cmpInts(a, b, "<");
  return x < y;
}

export function ile(a: Value, b: Value): boolean {
  const [x, y] = cmpInts(a, b, "<=");
  return x <= y;
}

export function igt(a: Value, b: Value): boolean {
  const [x, y] = cmpInts(a, b, ">");
  return x > y;
}

export function ige(a: Value, b: Value): boolean {
  const [x, y] = cmpInts(a, b, ">=");
  return x >= y;
}

// Truth check for guards and boolean operators.
export function tb(x: Value): boolean {
  if (typeof x !== "boolean") {
    throw new EvalError("boolean operator on non-boolean operand");
  }
  return x;
}

// Port read inside an expression: absent is an evaluation error.
export function rq(msg: Msg | undefined, port: string): Value {
  if (msg === null || msg === undefined) {
    throw new EvalError(`read of absent message on port '${port}'`);
  }
  return msg;
}
