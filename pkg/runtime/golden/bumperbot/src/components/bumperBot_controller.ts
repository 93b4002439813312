// Generated by arckit 1.0.0 for model BumperBot -- do not edit.

import { AtomicDef } from "../runtime/scheduler";
import * as V from "../runtime/values";

export const def: AtomicDef = {
  kind: "automaton",
  path: "bumperBot.controller",
  inPorts: ["bump", "signal"],
  outPorts: ["left", "right", "timer"],
  vars: [],
  initialState: "Driving",
  initialActions: [["left", (v, p) => "FORWARD"], ["right", (v, p) => "FORWARD"]],
  transitions: [
    { from: "Driving", to: "Backing", pattern: [["bump", { kind: "lit", value: true }]], guard: null, actions: [["left", (v, p) => "BACKWARD"], ["right", (v, p) => "BACKWARD"], ["timer", (v, p) => "SET"]] },
    { from: "Backing", to: "Turning", pattern: [["signal", { kind: "lit", value: "ALERT" }]], guard: null, actions: [["left", (v, p) => "FORWARD"], ["right", (v, p) => "BACKWARD"], ["timer", (v, p) => "SET"]] },
    { from: "Turning", to: "Driving", pattern: [["signal", { kind: "lit", value: "ALERT" }]], guard: null, actions: [["left", (v, p) => "FORWARD"], ["right", (v, p) => "FORWARD"]] },
  ],
};
