// Generated by arckit 1.0.0 for model BumperBot -- do not edit.

import { AtomicDef } from "../runtime/scheduler";
import { TouchSensorImpl } from "../../impl/TouchSensorImpl";

export const def: AtomicDef = {
  kind: "native",
  path: "bumperBot.sensor",
  inPorts: [],
  outPorts: ["bump"],
  component: "TouchSensor",
  config: {},
  makeImpl: () => TouchSensorImpl,
};
