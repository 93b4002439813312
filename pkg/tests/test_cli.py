from __future__ import annotations

import json

import pytest

from arckit.cli import main

from .conftest import GOLDEN, MODELS

BOT = str(MODELS / "bumperbot.arc")
LIB = str(MODELS / "lib.arc")
STUBS = str(GOLDEN / "bumperbot_stubs.jsonl")
GOLDEN_TRACE = GOLDEN / "bumperbot_trace.jsonl"


def test_check_valid_corpus_exits_zero(capsys):
    assert main(["check", BOT, LIB]) == 0
    assert capsys.readouterr().out == ""


def test_check_type_mismatch_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.arc"
    bad.write_text((MODELS / "bumperbot.arc").read_text() + """
component Weird {
  instance TouchSensor s;
  instance Motor m;
  connect s.bump -> m.cmd;
}
""")
    assert main(["check", str(bad), "--json"]) == 1
    out = capsys.readouterr().out
    records = [json.loads(line) for line in out.splitlines()]
    errors = [r for r in records if r["severity"] == "error"]
    assert len(errors) == 1 and errors[0]["code"] == "W5"
    assert {"severity", "code", "message", "file", "line", "column"} <= errors[0].keys()


def test_check_missing_file_exits_two(capsys):
    assert main(["check", "no/such/file.arc"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_check_parse_error_exits_two(tmp_path, capsys):
    bad = tmp_path / "broken.arc"
    bad.write_text("component { nonsense")
    assert main(["check", str(bad)]) == 2


def test_checker_error_corpus_exit_codes(capsys):
    from .conftest import INVALID
    for path in sorted(INVALID.glob("*.arc")):
        assert main(["check", str(path)]) == 1, path.name


def test_simulate_golden_scenario(tmp_path):
    out = tmp_path / "trace.jsonl"
    code = main(["simulate", BOT, "--root", "BumperBot", "--stubs", STUBS,
                 "--ticks", "20", "--output", str(out)])
    assert code == 0
    assert out.read_bytes() == GOLDEN_TRACE.read_bytes()


def test_simulate_zero_ticks_writes_empty_file(tmp_path):
    out = tmp_path / "trace.jsonl"
    code = main(["simulate", BOT, "--root", "BumperBot", "--stubs", STUBS,
                 "--ticks", "0", "--output", str(out)])
    assert code == 0
    assert out.read_bytes() == b""


def test_simulate_missing_stub_exits_three(tmp_path, capsys):
    out = tmp_path / "trace.jsonl"
    code = main(["simulate", BOT, "--root", "BumperBot",
                 "--ticks", "5", "--output", str(out)])
    assert code == 3
    assert "bumperBot.sensor" in capsys.readouterr().err


def test_simulate_unknown_root_exits_two(tmp_path, capsys):
    code = main(["simulate", BOT, "--root", "Nope", "--ticks", "1",
                 "--output", str(tmp_path / "t.jsonl")])
    assert code == 2
    assert "Nope" in capsys.readouterr().err


def test_simulate_rejects_bad_input_keys(tmp_path, capsys):
    env = tmp_path / "env.jsonl"
    env.write_text('{"tick":0,"ports":{"bumperBot.controller.bump":true}}\n')
    code = main(["simulate", BOT, "--root", "BumperBot", "--input", str(env),
                 "--stubs", STUBS, "--ticks", "3", "--output", str(tmp_path / "o.jsonl")])
    assert code == 2
    assert "not an in-port of the root" in capsys.readouterr().err


def test_simulate_runtime_error_exits_three(tmp_path, capsys):
    bad = tmp_path / "crashy.arc"
    bad.write_text("""
component Crashy {
  port in Boolean i;
  port out Integer o;
  rules {
    var Integer n = 0;
    [i = *] => {o = 1 / n};
  }
}
""")
    env = tmp_path / "env.jsonl"
    env.write_text('{"tick":2,"ports":{"crashy.i":true}}\n')
    code = main(["simulate", str(bad), "--root", "Crashy", "--input", str(env),
                 "--ticks", "5", "--output", str(tmp_path / "o.jsonl")])
    assert code == 3
    err = capsys.readouterr().err
    assert "crashy" in err and "tick 2" in err


def test_generate_dot(tmp_path, capsys):
    code = main(["generate", BOT, "--root", "BumperBot", "--backend", "dot",
                 "--out", str(tmp_path)])
    assert code == 0
    text = (tmp_path / "bumperBot.dot").read_text()
    assert text.count("shape=box") == 5


def test_generate_reference_and_regeneration_report(tmp_path, capsys):
    args = ["generate", BOT, "--root", "BumperBot", "--backend", "reference",
            "--out", str(tmp_path)]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert "written=15" in first

    impl = tmp_path / "impl" / "TouchSensorImpl.ts"
    edited = impl.read_text() + "// my change\n"
    impl.write_text(edited)

    assert main(args) == 0
    second = capsys.readouterr().out
    assert "skipped=1" in second
    assert "written=0" in second
    assert impl.read_text() == edited


def test_generate_emit_failure_exits_four(tmp_path, capsys):
    blocked = tmp_path / "out"
    blocked.mkdir()
    (blocked / "src").write_text("a file where a directory must go")
    code = main(["generate", BOT, "--root", "BumperBot", "--backend", "reference",
                 "--out", str(blocked)])
    assert code == 4
    assert "error" in capsys.readouterr().err


def test_graph_to_stdout(capsys):
    assert main(["graph", BOT, "--root", "BumperBot"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("// Generated by arckit")
    assert "digraph" in out


def test_json_diagnostics_are_jsonl(tmp_path, capsys):
    bad = tmp_path / "w.arc"
    bad.write_text("component A { instance Ghost g; }")
    main(["check", str(bad), "--json"])
    for line in capsys.readouterr().out.splitlines():
        json.loads(line)
