import { describe, expect, test } from "vitest";

import {
  EvalError,
  INT_MAX,
  INT_MIN,
  iadd,
  idiv,
  imul,
  isub,
  veq,
  vne,
  ilt,
  ige,
} from "../golden/bumperbot/src/runtime/values";

describe("checked 64-bit integers", () => {
  test("addition overflows at the signed boundary", () => {
    expect(iadd(INT_MAX - 1n, 1n)).toBe(INT_MAX);
    expect(() => iadd(INT_MAX, 1n)).toThrow(EvalError);
    expect(() => isub(INT_MIN, 1n)).toThrow(EvalError);
    expect(() => imul(INT_MAX, 2n)).toThrow(EvalError);
  });

  test("division truncates toward zero", () => {
    expect(idiv(7n, 2n)).toBe(3n);
    expect(idiv(-7n, 2n)).toBe(-3n);
    expect(idiv(7n, -2n)).toBe(-3n);
    expect(idiv(-7n, -2n)).toBe(3n);
  });

  test("division by zero and MIN/-1 are errors", () => {
    expect(() => idiv(1n, 0n)).toThrow("division by zero");
    expect(() => idiv(INT_MIN, -1n)).toThrow("integer overflow");
  });

  test("arithmetic rejects non-integers", () => {
    expect(() => iadd(true, 1n)).toThrow(EvalError);
    expect(() => ilt("a", "b")).toThrow(EvalError);
  });
});

describe("message equality", () => {
  test("booleans and integers never compare equal", () => {
    expect(veq(true, true)).toBe(true);
    expect(veq(true, 1n)).toBe(false);
    expect(vne("UP", "DOWN")).toBe(true);
    expect(veq(2n, 2n)).toBe(true);
  });

  test("ordering works across the full 64-bit range", () => {
    expect(ilt(INT_MIN, INT_MAX)).toBe(true);
    expect(ige(INT_MAX, INT_MAX)).toBe(true);
  });
});
