// Generated by arckit 1.0.0 for model BumperBot -- do not edit.

import { AtomicDef } from "../runtime/scheduler";
import * as V from "../runtime/values";

export const def: AtomicDef = {
  kind: "rules",
  path: "bumperBot.timer",
  inPorts: ["cmd"],
  outPorts: ["signal"],
  vars: [["t", () => 0n]],
  rules: [
    { pattern: [["cmd", { kind: "lit", value: "SET" }]], guard: null, actions: [["signal", null], ["t", (v, p) => 0n]] },
    { pattern: [["cmd", { kind: "absent" }]], guard: (v, p) => V.ilt(v["t"], 3n), actions: [["signal", null], ["t", (v, p) => V.iadd(v["t"], 1n)]] },
    { pattern: [["cmd", { kind: "absent" }]], guard: (v, p) => V.ige(v["t"], 3n), actions: [["signal", (v, p) => "ALERT"], ["t", (v, p) => 0n]] },
  ],
};
