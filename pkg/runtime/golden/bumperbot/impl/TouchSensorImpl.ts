// Implementation of native component TouchSensor.
//
// This file was created once by the generator and is yours: regeneration
// never overwrites it. Keep per-instance state in the value returned by
// init and threaded through react. Out-ports of TouchSensor: bump.
// Output ports left out of the returned record emit no message that tick.

import type { Msg, Value } from "../src/runtime/values";

export const TouchSensorImpl = {
  init(_config: Record<string, Value>): unknown {
    return null;
  },
  react(state: unknown, _inputs: Record<string, Msg>): [unknown, Record<string, Msg>] {
    return [state, {}];
  },
};
