from __future__ import annotations

import random

import pytest

from arckit.checker import check, has_errors
from arckit.errors import EvalError, MissingBinding
from arckit.model import elaborate
from arckit.sim import NativeImpl, ScriptedStub, init_runtime, run, step
from arckit.trace import read_trace

from .conftest import GOLDEN, checked, parse_text
from .modelgen import gen_valid_model, random_env

TIMER_HARNESS = """
enum TimerCmd { SET }
enum TimerSignal { ALERT }

component Timer(Integer limit) {
  port in TimerCmd cmd;
  port out TimerSignal signal;
  rules {
    var Integer t = 0;
    [cmd = SET] => {signal = --, t = 0};
    [cmd = --, t < limit] => {signal = --, t = t + 1};
    [cmd = --, t >= limit] => {signal = ALERT, t = 0};
  }
}

component Harness {
  port in TimerCmd cmd;
  port out TimerSignal signal;
  instance Timer(3) t;
  connect cmd -> t.cmd;
  connect t.signal -> signal;
}
"""


def _timer_model():
    table = checked([parse_text(TIMER_HARNESS, "timer.arc")])
    return elaborate(table.components()["Harness"], table.globals), table


def test_set_command_resets_timer_and_silences_next_tick():
    model, table = _timer_model()
    state = init_runtime(model, enums=table.globals)
    # Warm the timer up so t is mid-count, then deliver SET.
    for tick in range(3):
        state, _ = step(state)
    assert state.snapshot("harness.t")["variables"]["t"] == 3
    state, _ = step(state, {"harness.cmd": "SET"})
    snap = state.snapshot("harness.t")
    assert snap["variables"]["t"] == 0
    assert snap["pending"]["signal"] is None


def test_stutter_keeps_state_and_emits_absence():
    unit = parse_text("""
component Stubborn {
  port in Boolean go;
  port out Boolean res;
  automaton {
    var Integer n = 7;
    state Idle, Busy;
    initial Idle;
    Idle -> Busy [go = true] / {res = true, n = 0};
  }
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Stubborn"], table.globals)
    state = init_runtime(model, enums=table.globals)
    for _ in range(4):
        state, row = step(state)
        assert row["stubborn.res"] is None
    snap = state.snapshot("stubborn")
    assert snap["state"] == "Idle"
    assert snap["variables"] == {"n": 7}


def test_pipeline_unit_delay_against_stream_oracle():
    """Two delay-free-wired components, each with one tick of internal delay."""
    unit = parse_text("""
component Echo {
  port in Integer i;
  port out Integer o;
  rules {
    [i = *] => {o = i};
  }
}

component Pipe {
  port in Integer x;
  port out Integer y;
  instance Echo a;
  instance Echo b;
  connect x -> a.i;
  connect a.o -> b.i;
  connect b.o -> y;
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Pipe"], table.globals)

    ticks = 12
    env_stream = [None, None, None, 41, None, 5, 6, None, None, 9, None, None]

    # Independent oracle: explicit stream lists under the unit-delay rule.
    out_a = [None] * ticks
    out_b = [None] * ticks
    for t in range(ticks - 1):
        out_a[t + 1] = env_stream[t]
        out_b[t + 1] = out_a[t]

    env = {t: {"pipe.x": v} for t, v in enumerate(env_stream) if v is not None}
    trace = run(model, env=env, ticks=ticks, enums=table.globals)
    assert trace.column("pipe.a.o") == out_a
    assert trace.column("pipe.b.i") == out_a  # connectors are delay-free
    assert trace.column("pipe.b.o") == out_b
    assert trace.column("pipe.y") == out_b
    # "A emits v at tick 3" shows on B's input at tick 4
    assert trace.at(3, "pipe.x") == 41
    assert trace.at(4, "pipe.b.i") == 41


def test_init_runtime_bumperbot(bumperbot, corpus_table):
    stub = ScriptedStub({4: {"bump": True}})
    state = init_runtime(bumperbot, {"bumperBot.sensor": stub}, enums=corpus_table.globals)
    controller = state.snapshot("bumperBot.controller")
    assert controller["state"] == "Driving"
    assert controller["pending"] == {"left": "FORWARD", "right": "FORWARD", "timer": None}
    assert state.snapshot("bumperBot.timer")["variables"] == {"t": 0}


def test_no_initial_outputs_means_absent_at_tick_zero():
    unit = parse_text("""
component Quiet {
  port out Boolean o;
  automaton {
    state S;
    initial S;
    S -> S / {o = true};
  }
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Quiet"], table.globals)
    trace = run(model, ticks=3, enums=table.globals)
    assert trace.column("quiet.o") == [None, True, True]


def test_missing_binding_names_the_instance(bumperbot):
    with pytest.raises(MissingBinding) as exc:
        init_runtime(bumperbot, {})
    assert "bumperBot.sensor" in str(exc.value)


def test_natives_without_out_ports_need_no_binding(bumperbot, corpus_table):
    stub = ScriptedStub({0: {"bump": False}})
    state = init_runtime(bumperbot, {"bumperBot.sensor": stub}, enums=corpus_table.globals)
    assert state.snapshot("bumperBot.leftMotor")["pending"] == {}


def test_run_zero_ticks_is_empty(bumperbot, corpus_table):
    stub = ScriptedStub({})
    trace = run(bumperbot, {"bumperBot.sensor": stub}, ticks=0, enums=corpus_table.globals)
    assert len(trace) == 0
    assert trace.dump() == ""


def test_all_absent_env_on_stutter_only_automaton():
    unit = parse_text("""
component Inert {
  port in Boolean i;
  port out Boolean o;
  automaton {
    state S;
    initial S;
    S -> S [i = true] / {o = true};
  }
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Inert"], table.globals)
    trace = run(model, ticks=8, enums=table.globals)
    assert trace.column("inert.o") == [None] * 8


def test_scripted_stub_values_visible_at_listed_tick():
    unit = parse_text("""
component Src {
  port out Integer o;
  native;
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Src"], table.globals)
    stub = ScriptedStub({0: {"o": 10}, 2: {"o": 30}})
    trace = run(model, {"src": stub}, ticks=4, enums=table.globals)
    assert trace.column("src.o") == [10, None, 30, None]


def test_native_react_is_unit_delayed():
    unit = parse_text("""
component Inc {
  port in Integer i;
  port out Integer o;
  native;
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Inc"], table.globals)

    class Incrementer(NativeImpl):
        def react(self, state, inputs):
            v = inputs.get("i")
            return state, {} if v is None else {"o": v + 1}

    env = {0: {"inc.i": 10}, 2: {"inc.i": 20}}
    trace = run(model, {"inc": Incrementer()}, env=env, ticks=4, enums=table.globals)
    assert trace.column("inc.o") == [None, 11, None, 21]


def test_native_output_on_unknown_port_is_an_error():
    unit = parse_text("component Bad { port out Integer o; native; }")
    table = checked([unit])
    model = elaborate(table.components()["Bad"], table.globals)

    class Chatty(NativeImpl):
        def react(self, state, inputs):
            return state, {"nope": 1}

    with pytest.raises(EvalError) as exc:
        run(model, {"bad": Chatty()}, ticks=1, enums=table.globals)
    assert "nope" in str(exc.value)


def test_eval_error_carries_path_and_tick():
    unit = parse_text("""
component Crashy {
  port in Boolean i;
  port out Integer o;
  rules {
    var Integer n = 0;
    [i = *] => {o = 1 / n};
  }
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Crashy"], table.globals)
    with pytest.raises(EvalError) as exc:
        run(model, env={3: {"crashy.i": True}}, ticks=6, enums=table.globals)
    assert exc.value.path == "crashy"
    assert exc.value.tick == 3
    assert "division by zero" in str(exc.value)


def test_env_list_shorter_than_ticks_is_rejected(bumperbot, corpus_table):
    with pytest.raises(ValueError):
        run(bumperbot, {"bumperBot.sensor": ScriptedStub({})}, env=[{}, {}], ticks=5,
            enums=corpus_table.globals)


def test_determinism_bit_for_bit():
    rng = random.Random(42)
    root, library = gen_valid_model(rng)
    unit_table, diagnostics = check([_as_unit(root, library)])
    assert not has_errors(diagnostics)
    model = elaborate(root, library)
    env = random_env(random.Random(43), model, 30)
    a = run(model, env=env, ticks=30, enums=library).dump()
    b = run(model, env=env, ticks=30, enums=library).dump()
    assert a == b


def _as_unit(root, library):
    from arckit import model as m
    from arckit.parser import SourceUnit
    enums = tuple(v for v in library.values() if isinstance(v, m.EnumDecl))
    comps = tuple(v for v in library.values() if isinstance(v, m.ComponentType))
    return SourceUnit("<gen>", enums, comps)


def test_prefix_monotonicity_and_stutter_closure():
    for seed in (1, 2, 3, 4, 5):
        rng = random.Random(3000 + seed)
        root, library = gen_valid_model(rng)
        model = elaborate(root, library)
        env_rows = random_env(random.Random(seed), model, 20)

        full = run(model, env=env_rows + [{}] * 10, ticks=30, enums=library)
        short = run(model, env=env_rows, ticks=20, enums=library)
        for t in range(20):
            assert full.rows[t] == short.rows[t], f"seed {seed} tick {t}"
