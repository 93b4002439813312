from __future__ import annotations

import random

from arckit.flatten import flatten
from arckit.model import elaborate
from arckit.sim import run

from .conftest import checked, parse_text
from .modelgen import gen_valid_model, random_env


def _retained_keys(model):
    keys = set()
    root = model.root
    for node in model.nodes():
        if node.behavior is not None:
            keys.update(f"{node.path}.{p.name}" for p in node.ports)
    keys.update(f"{root.path}.{p.name}" for p in root.ports)
    return keys


def test_flatten_structure_of_nested_delays():
    unit = parse_text("""
component Echo {
  port in Integer i;
  port out Integer o;
  rules {
    [i = *] => {o = i};
  }
}

component Inner {
  port in Integer i;
  port out Integer o;
  instance Echo e;
  connect i -> e.i;
  connect e.o -> o;
}

component Outer {
  port in Integer x;
  port out Integer y;
  instance Inner a;
  instance Inner b;
  connect x -> a.i;
  connect a.o -> b.i;
  connect b.o -> y;
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Outer"], table.globals)
    flat = flatten(model)
    assert all(c.behavior is not None for c in flat.root.children)
    assert {c.path for c in flat.root.children} == {"outer.a.e", "outer.b.e"}

    env = {0: {"outer.x": 9}, 3: {"outer.x": 4}}
    t_hier = run(model, env=env, ticks=8, enums=table.globals)
    t_flat = run(flat, env=env, ticks=8, enums=table.globals)
    keys = sorted(_retained_keys(model))
    assert t_hier.restricted(keys).dump() == t_flat.restricted(keys).dump()
    # two echoes in series: x shows up on y two ticks later
    assert t_hier.column("outer.y") == [None, None, 9, None, None, 4, None, None]


def test_flatten_is_identity_for_atomic_root():
    unit = parse_text("component Solo { port out Boolean o; native; }")
    table = checked([unit])
    model = elaborate(table.components()["Solo"], table.globals)
    assert flatten(model) is model


def test_pass_through_cycle_between_composites_is_all_absent():
    unit = parse_text("""
component Pad {
  port in Boolean i;
  port out Boolean o;
  rules {
    [i = *] => {o = i};
  }
}

component Wire {
  port in Boolean i;
  port out Boolean o;
  instance Pad unused;
  connect i -> o;
}

component Loop {
  instance Wire a;
  instance Wire b;
  connect a.o -> b.i;
  connect b.o -> a.i;
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Loop"], table.globals)
    trace = run(model, ticks=4, enums=table.globals)
    for key in ("loop.a.i", "loop.a.o", "loop.b.i", "loop.b.o"):
        assert trace.column(key) == [None] * 4
    flat = flatten(model)
    t_flat = run(flat, ticks=4, enums=table.globals)
    keys = sorted(_retained_keys(model))
    assert trace.restricted(keys).dump() == t_flat.restricted(keys).dump()


def test_flattening_equivalence_on_random_hierarchies_smoke():
    for seed in range(20):
        rng = random.Random(4000 + seed)
        root, library = gen_valid_model(rng)
        model = elaborate(root, library)
        flat = flatten(model)
        env = random_env(random.Random(seed), model, 25)
        t_hier = run(model, env=env, ticks=25, enums=library)
        t_flat = run(flat, env=env, ticks=25, enums=library)
        keys = sorted(_retained_keys(model))
        assert t_hier.restricted(keys).dump() == t_flat.restricted(keys).dump(), f"seed {seed}"
