import { execFileSync } from "child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join, resolve } from "path";
import { describe, expect, test } from "vitest";

import { runModel } from "../golden/bumperbot/src/runtime/scheduler";
import { parseTraceLines } from "../golden/bumperbot/src/runtime/trace";
import { model } from "../golden/bumperbot/src/model";

const REPO = resolve(__dirname, "..", "..");
const GOLDEN_INPUT = join(REPO, "models", "golden", "bumperbot_stubs.jsonl");
const GOLDEN_TRACE = join(REPO, "models", "golden", "bumperbot_trace.jsonl");
const PROJECT = resolve(__dirname, "..", "golden", "bumperbot");

function goldenScripts() {
  const schedule = parseTraceLines(readFileSync(GOLDEN_INPUT, "utf-8"), GOLDEN_INPUT);
  const scripts = new Map<string, Map<number, Map<string, import("../golden/bumperbot/src/runtime/values").Msg>>>();
  for (const [tick, row] of schedule.entries()) {
    for (const [key, value] of row.entries()) {
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
    }
  }
  return scripts;
}

describe("golden BumperBot project", () => {
  test("in-process run reproduces the golden trace byte for byte", () => {
    const lines = runModel(model, new Map(), goldenScripts(), 20);
    const text = lines.map((l) => l + "\n").join("");
    expect(text).toBe(readFileSync(GOLDEN_TRACE, "utf-8"));
  });

  test("the robot drives, backs off, turns, and drives again", () => {
    const lines = runModel(model, new Map(), goldenScripts(), 20);
    const pairs: string[] = [];
    for (const line of lines) {
      const row = (JSON.parse(line) as { ports: Record<string, string | null> }).ports;
      const pair = `${row["bumperBot.leftMotor.cmd"]}/${row["bumperBot.rightMotor.cmd"]}`;
      if (pair !== "null/null" && pairs[pairs.length - 1] !== pair) {
        pairs.push(pair);
      }
    }
    expect(pairs).toStrictEqual([
      "FORWARD/FORWARD",
      "BACKWARD/BACKWARD",
      "FORWARD/BACKWARD",
      "FORWARD/FORWARD",
    ]);
  });

  test("command-line contract: --input/--ticks/--output", () => {
    const tsc = join(__dirname, "..", "node_modules", ".bin", "tsc");
    execFileSync(tsc, ["-p", PROJECT], { stdio: "pipe" });
    const out = join(mkdtempSync(join(tmpdir(), "arc-golden-")), "trace.jsonl");
    execFileSync(
      process.execPath,
      [join(PROJECT, "dist", "src", "main.js"),
       "--input", GOLDEN_INPUT, "--ticks", "20", "--output", out],
      { stdio: "pipe" },
    );
    expect(readFileSync(out)).toStrictEqual(readFileSync(GOLDEN_TRACE));
  });

  test("exit code 2 on malformed input", () => {
    const bad = join(mkdtempSync(join(tmpdir(), "arc-bad-")), "bad.jsonl");
    writeFileSync(bad, '{"tick":0,"ports":{"no.such.port":1}}\n', "utf-8");
    let code = 0;
    try {
      execFileSync(
        process.execPath,
        [join(PROJECT, "dist", "src", "main.js"),
         "--input", bad, "--ticks", "1", "--output", join(bad, "..", "out.jsonl")],
        { stdio: "pipe" },
      );
    } catch (e) {
      code = (e as { status: number }).status;
    }
    expect(code).toBe(2);
  });
});
