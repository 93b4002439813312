// Generated by arckit 1.0.0 for model BumperBot -- do not edit.
//
// Command line: <program> --input <trace.jsonl> --ticks N --output <trace.jsonl>
//
// Input entries addressed to the root component's in-ports are environment
// values; entries addressed to a native instance's out-ports turn that
// instance into a scripted replay (its bound implementation is bypassed and
// unlisted ticks emit no message). Exit codes: 0 ok, 2 usage or input
// problem, 3 evaluation error.

import { readFileSync, writeFileSync } from "fs";
import { EvalError, Msg } from "./runtime/values";
import { TraceFormatError, parseTraceLines } from "./runtime/trace";
import { runModel } from "./runtime/scheduler";
import { model } from "./model";

function usage(message: string): never {
  process.stderr.write(`error: ${message}\n`);
  process.stderr.write("usage: main --input <trace.jsonl> --ticks N --output <trace.jsonl>\n");
  process.exit(2);
}

function parseArgs(argv: string[]): { input: string | null; output: string | null; ticks: number } {
  let input: string | null = null;
  let output: string | null = null;
  let ticks: number | null = null;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) {
        usage(`missing value for ${arg}`);
      }
      return argv[++i];
    };
    if (arg === "--input") {
      input = next();
    } else if (arg === "--output") {
      output = next();
    } else if (arg === "--ticks") {
      const raw = next();
      ticks = Number(raw);
      if (!Number.isInteger(ticks) || ticks < 0) {
        usage(`--ticks must be a non-negative integer, got '${raw}'`);
      }
    } else {
      usage(`unknown argument '${arg}'`);
    }
  }
  if (ticks === null) {
    usage("--ticks is required");
  }
  return { input, output, ticks };
}

function main(): void {
  const { input, output, ticks } = parseArgs(process.argv.slice(2));

  const env = new Map<number, Map<string, Msg>>();
  const scripts = new Map<string, Map<number, Map<string, Msg>>>();
  if (input !== null) {
    let text: string;
    try {
      text = readFileSync(input, "utf-8");
    } catch (e) {
      usage(`cannot read '${input}': ${(e as Error).message}`);
    }
    let schedule: Map<number, Map<string, Msg>>;
    try {
      schedule = parseTraceLines(text, input);
    } catch (e) {
      if (e instanceof TraceFormatError) {
        usage(e.message);
      }
      throw e;
    }
    const rootIn = new Set(model.rootInPorts);
    for (const [tick, row] of schedule.entries()) {
      for (const [key, value] of row.entries()) {
        if (rootIn.has(key)) {
          let envRow = env.get(tick);
          if (envRow === undefined) {
            env.set(tick, (envRow = new Map()));
          }
          envRow.set(key, value);
        } else if (key in model.nativeOuts) {
          const [path, port] = model.nativeOuts[key];
          let script = scripts.get(path);
          if (script === undefined) {
            scripts.set(path, (script = new Map()));
          }
          let scriptRow = script.get(tick);
          if (scriptRow === undefined) {
            script.set(tick, (scriptRow = new Map()));
          }
          scriptRow.set(port, value);
        } else {
          usage(`input addresses '${key}', which is neither a root in-port nor a native out-port`);
        }
      }
    }
  }

  let lines: string[];
  try {
    lines = runModel(model, env, scripts, ticks);
  } catch (e) {
    if (e instanceof EvalError) {
      process.stderr.write(`error: ${e.message}\n`);
      process.exit(3);
    }
    throw e;
  }
  const text = lines.map((line) => line + "\n").join("");
  if (output !== null) {
    writeFileSync(output, text, "utf-8");
  } else {
    process.stdout.write(text);
  }
}

main();
