// Generated by arckit 1.0.0 for model BumperBot -- do not edit.

import { ModelDef } from "./runtime/scheduler";
import { def as c0 } from "./components/bumperBot_sensor";
import { def as c1 } from "./components/bumperBot_controller";
import { def as c2 } from "./components/bumperBot_timer";
import { def as c3 } from "./components/bumperBot_leftMotor";
import { def as c4 } from "./components/bumperBot_rightMotor";

export const model: ModelDef = {
  name: "BumperBot",
  portKeys: ["bumperBot.controller.bump", "bumperBot.controller.left", "bumperBot.controller.right", "bumperBot.controller.signal", "bumperBot.controller.timer", "bumperBot.leftMotor.cmd", "bumperBot.rightMotor.cmd", "bumperBot.sensor.bump", "bumperBot.timer.cmd", "bumperBot.timer.signal"],
  drivers: {
    "bumperBot.controller.bump": { kind: "producer", path: "bumperBot.sensor", port: "bump" },
    "bumperBot.controller.left": { kind: "producer", path: "bumperBot.controller", port: "left" },
    "bumperBot.controller.right": { kind: "producer", path: "bumperBot.controller", port: "right" },
    "bumperBot.controller.signal": { kind: "producer", path: "bumperBot.timer", port: "signal" },
    "bumperBot.controller.timer": { kind: "producer", path: "bumperBot.controller", port: "timer" },
    "bumperBot.leftMotor.cmd": { kind: "producer", path: "bumperBot.controller", port: "left" },
    "bumperBot.rightMotor.cmd": { kind: "producer", path: "bumperBot.controller", port: "right" },
    "bumperBot.sensor.bump": { kind: "producer", path: "bumperBot.sensor", port: "bump" },
    "bumperBot.timer.cmd": { kind: "producer", path: "bumperBot.controller", port: "timer" },
    "bumperBot.timer.signal": { kind: "producer", path: "bumperBot.timer", port: "signal" },
  },
  atomics: [c0, c1, c2, c3, c4],
  rootInPorts: [],
  nativeOuts: {
    "bumperBot.sensor.bump": ["bumperBot.sensor", "bump"],
  },
};
