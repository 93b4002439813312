// Generated by arckit 1.0.0 for model BumperBot -- do not edit.
//
// Trace serialization: one JSON object per line, `{"tick":N,"ports":{...}}`,
// port keys sorted, null for absence, no whitespace. The writer and reader
// are hand-rolled so BigInt integers survive with full 64-bit precision;
// the byte output matches the simulator's writer exactly.

import { Msg } from "./values";

export class TraceFormatError extends Error {}

function escapeString(s: string): string {
  // JSON.stringify's escaping (quote, backslash, control characters) is
  // exactly what the reference writer produces for UTF-8 output.
  return JSON.stringify(s);
}

export function formatValue(v: Msg): string {
  if (v === null) {
    return "null";
  }
  switch (typeof v) {
    case "boolean":
      return v ? "true" : "false";
    case "bigint":
      return v.toString();
    default:
      return escapeString(v);
  }
}

export function formatLine(tick: number, keys: readonly string[], row: Map<string, Msg>): string {
  const parts: string[] = [];
  for (const key of keys) {
    const v = row.get(key);
    parts.push(`${escapeString(key)}:${formatValue(v === undefined ? null : v)}`);
  }
  return `{"tick":${tick},"ports":{${parts.join(",")}}}`;
}

// -- reading ---------------------------------------------------------------

class Scanner {
  pos = 0;

  constructor(private text: string, private where: string) {}

  error(msg: string): never {
    throw new TraceFormatError(`${this.where}: ${msg}`);
  }

  peek(): string {
    return this.text[this.pos] ?? "";
  }

  skipWs(): void {
    while (" \t\r\n".includes(this.peek()) && this.pos < this.text.length) {
      this.pos++;
    }
  }

  expect(ch: string): void {
    if (this.text[this.pos] !== ch) {
      this.error(`expected '${ch}'`);
    }
    this.pos++;
  }

  atEnd(): boolean {
    this.skipWs();
    return this.pos >= this.text.length;
  }

  value(): Msg {
    this.skipWs();
    const c = this.peek();
    if (c === '"') {
      return this.string();
    }
    if (c === "-" || (c >= "0" && c <= "9")) {
      return this.number();
    }
    if (this.text.startsWith("null", this.pos)) {
      this.pos += 4;
      return null;
    }
    if (this.text.startsWith("true", this.pos)) {
      this.pos += 4;
      return true;
    }
    if (this.text.startsWith("false", this.pos)) {
      this.pos += 5;
      return false;
    }
    this.error("unsupported value");
  }

  number(): bigint {
    const start = this.pos;
    if (this.peek() === "-") {
      this.pos++;
    }
    while (this.peek() >= "0" && this.peek() <= "9") {
      this.pos++;
    }
    if (this.pos === start || (this.pos === start + 1 && this.text[start] === "-")) {
      this.error("malformed number");
    }
    if (this.peek() === "." || this.peek() === "e" || this.peek() === "E") {
      this.error(`non-integer number`);
    }
    return BigInt(this.text.slice(start, this.pos));
  }

  string(): string {
    this.expect('"');
    let out = "";
    for (;;) {
      if (this.pos >= this.text.length) {
        this.error("unterminated string");
      }
      const c = this.text[this.pos++];
      if (c === '"') {
        return out;
      }
      if (c === "\\") {
        const e = this.text[this.pos++];
        switch (e) {
          case '"':
          case "\\":
          case "/":
            out += e;
            break;
          case "n":
            out += "\n";
            break;
          case "t":
            out += "\t";
            break;
          case "r":
            out += "\r";
            break;
          case "b":
            out += "\b";
            break;
          case "f":
            out += "\f";
            break;
          case "u": {
            const hex = this.text.slice(this.pos, this.pos + 4);
            if (!/^[0-9a-fA-F]{4}$/.test(hex)) {
              this.error("malformed unicode escape");
            }
            out += String.fromCharCode(parseInt(hex, 16));
            this.pos += 4;
            break;
          }
          default:
            this.error(`unknown escape '\\${e}'`);
        }
      } else {
        out += c;
      }
    }
  }
}

export function parseTraceLines(text: string, origin: string): Map<number, Map<string, Msg>> {
  const schedule = new Map<number, Map<string, Msg>>();
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    if (lines[i].trim() === "") {
      continue;
    }
    const sc = new Scanner(lines[i], `${origin}:${i + 1}`);
    sc.skipWs();
    sc.expect("{");
    let tick: number | null = null;
    let ports: Map<string, Msg> | null = null;
    for (;;) {
      sc.skipWs();
      if (sc.peek() === "}") {
        sc.expect("}");
        break;
      }
      const key = sc.string();
      sc.skipWs();
      sc.expect(":");
      if (key === "tick") {
        const t = sc.value();
        if (typeof t !== "bigint" || t < 0n) {
          sc.error("'tick' must be a non-negative integer");
        }
        tick = Number(t);
      } else if (key === "ports") {
        ports = new Map();
        sc.skipWs();
        sc.expect("{");
        sc.skipWs();
        if (sc.peek() === "}") {
          sc.expect("}");
        } else {
          for (;;) {
            sc.skipWs();
            const pk = sc.string();
            sc.skipWs();
            sc.expect(":");
            ports.set(pk, sc.value());
            sc.skipWs();
            if (sc.peek() === ",") {
              sc.expect(",");
              continue;
            }
            sc.expect("}");
            break;
          }
        }
      } else {
        sc.value(); // tolerated and ignored
      }
      sc.skipWs();
      if (sc.peek() === ",") {
        sc.expect(",");
        continue;
      }
      sc.expect("}");
      break;
    }
    if (tick === null) {
      throw new TraceFormatError(`${origin}:${i + 1}: missing 'tick' field`);
    }
    const row = schedule.get(tick) ?? new Map<string, Msg>();
    for (const [k, v] of (ports ?? new Map()).entries()) {
      row.set(k, v);
    }
    schedule.set(tick, row);
  }
  return schedule;
}
