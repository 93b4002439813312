// Generated by arckit 1.0.0 for model BumperBot -- do not edit.

import { AtomicDef } from "../runtime/scheduler";
import { MotorImpl } from "../../impl/MotorImpl";

export const def: AtomicDef = {
  kind: "native",
  path: "bumperBot.leftMotor",
  inPorts: ["cmd"],
  outPorts: [],
  component: "Motor",
  config: {},
  makeImpl: () => MotorImpl,
};
