from __future__ import annotations

import builtins
import hashlib
import json

import pytest

from arckit import codegen
from arckit.codegen import GENERATED, USER_STUB, GeneratedFile, emit, get_backend
from arckit.codegen.scaffold import MAIN_ASSET, RUNTIME_ASSETS, ScaffoldAsset, render
from arckit.errors import MissingSlot
from arckit.model import elaborate

from .conftest import checked, parse_text


@pytest.fixture(scope="module")
def bot_files(bumperbot):
    return get_backend("reference").generate(bumperbot, {})


# -- render


def test_render_fills_version_slot():
    asset = RUNTIME_ASSETS[0]
    out = render(asset, {"GENERATOR_VERSION": "9.9.9", "MODEL_NAME": "X",
                         "SRC_DIR": "src", "IMPL_DIR": "impl"})
    assert b"Generated by arckit 9.9.9" in out
    assert b"@" + b"GENERATOR_VERSION" + b"@" not in out


def test_render_without_slots_is_identity():
    asset = ScaffoldAsset("x.txt", "no placeholders here\n")
    assert render(asset, {}) == b"no placeholders here\n"


def test_render_missing_slot():
    asset = ScaffoldAsset("x.txt", "version @GENERATOR_VERSION@ of @MODEL_NAME@")
    with pytest.raises(MissingSlot) as exc:
        render(asset, {"GENERATOR_VERSION": "1"})
    assert exc.value.slot == "MODEL_NAME"


def test_scaffold_assets_have_no_leftover_slots(bot_files):
    for f in bot_files:
        assert b"@GENERATOR_VERSION@" not in f.content, f.path
        assert b"@MODEL_NAME@" not in f.content, f.path


# -- emit


def _files():
    return [
        GeneratedFile("src/a.txt", b"alpha\n", GENERATED),
        GeneratedFile("impl/b.txt", b"stub\n", USER_STUB),
    ]


def test_emit_first_run_writes_everything(tmp_path):
    report = emit(_files(), str(tmp_path))
    assert sorted(report.written) == ["impl/b.txt", "src/a.txt"]
    assert report.skipped == [] and report.unchanged == [] and report.ok


def test_emit_rerun_is_unchanged(tmp_path):
    emit(_files(), str(tmp_path))
    report = emit(_files(), str(tmp_path))
    assert report.written == [] and report.skipped == []
    assert sorted(report.unchanged) == ["impl/b.txt", "src/a.txt"]


def test_emit_preserves_edited_stub(tmp_path):
    emit(_files(), str(tmp_path))
    edited = tmp_path / "impl" / "b.txt"
    edited.write_bytes(b"my own code\n")
    report = emit(_files(), str(tmp_path))
    assert report.skipped == ["impl/b.txt"]
    assert edited.read_bytes() == b"my own code\n"
    assert report.unchanged == ["src/a.txt"]


def test_emit_overwrites_changed_generated_files(tmp_path):
    emit(_files(), str(tmp_path))
    (tmp_path / "src" / "a.txt").write_bytes(b"tampered\n")
    report = emit(_files(), str(tmp_path))
    assert report.written == ["src/a.txt"]
    assert (tmp_path / "src" / "a.txt").read_bytes() == b"alpha\n"


def test_emit_collects_io_errors(tmp_path):
    blocker = tmp_path / "src"
    blocker.write_bytes(b"not a directory")
    report = emit(_files(), str(tmp_path))
    assert not report.ok
    assert any(path == "src/a.txt" for path, _ in report.errors)
    # the other file is still attempted
    assert report.written == ["impl/b.txt"]


# -- reference backend


def test_reference_inventory(bot_files):
    by_path = {f.path: f for f in bot_files}
    stubs = [f for f in bot_files if f.kind == USER_STUB]
    assert sorted(f.path for f in stubs) == ["impl/MotorImpl.ts", "impl/TouchSensorImpl.ts"]
    assert "src/model.ts" in by_path
    assert "src/main.ts" in by_path
    assert "arc-manifest.json" in by_path
    for node_file in ("bumperBot_sensor", "bumperBot_controller", "bumperBot_timer",
                      "bumperBot_leftMotor", "bumperBot_rightMotor"):
        assert f"src/components/{node_file}.ts" in by_path


def test_generated_files_carry_marker(bot_files):
    marker = f"{codegen.GENERATOR_NAME} {codegen.GENERATOR_VERSION}"
    for f in bot_files:
        if f.kind != GENERATED:
            continue
        head = f.content.decode("utf-8").splitlines()[:3]
        assert any(marker in line for line in head), f.path


def test_manifest_lists_hashes(bot_files):
    manifest = json.loads(next(f for f in bot_files if f.path == "arc-manifest.json").content)
    assert manifest["generator"].startswith("arckit ")
    assert manifest["model"] == "BumperBot"
    assert manifest["modelHash"].startswith("sha256:")
    listed = {entry["path"]: entry for entry in manifest["files"]}
    for f in bot_files:
        if f.path == "arc-manifest.json":
            continue
        assert listed[f.path]["sha256"] == hashlib.sha256(f.content).hexdigest()
        assert listed[f.path]["kind"] == f.kind


def test_generate_is_deterministic(bumperbot):
    backend = get_backend("reference")
    first = backend.generate(bumperbot, {})
    second = backend.generate(bumperbot, {})
    assert [(f.path, f.kind, f.content) for f in first] == \
        [(f.path, f.kind, f.content) for f in second]


def test_generate_never_touches_the_filesystem(bumperbot, monkeypatch):
    def forbidden(*args, **kwargs):
        raise AssertionError("backend touched the filesystem")

    import io
    import os
    monkeypatch.setattr(builtins, "open", forbidden)
    monkeypatch.setattr(io, "open", forbidden)
    monkeypatch.setattr(os, "listdir", forbidden)
    monkeypatch.setattr(os, "stat", forbidden)
    for backend_name in ("reference", "dot"):
        get_backend(backend_name).generate(bumperbot, {})


def test_custom_dir_options(bumperbot):
    files = get_backend("reference").generate(bumperbot, {"srcDir": "gen", "implDir": "user"})
    paths = {f.path for f in files}
    assert "gen/main.ts" in paths
    assert "user/TouchSensorImpl.ts" in paths
    wrapper = next(f for f in files if f.path == "gen/components/bumperBot_sensor.ts")
    assert b'from "../../user/TouchSensorImpl"' in wrapper.content


def test_bad_dir_option_rejected(bumperbot):
    with pytest.raises(ValueError):
        get_backend("reference").generate(bumperbot, {"srcDir": "a/b"})


# -- dot backend


def test_dot_bumperbot(bumperbot):
    files = get_backend("dot").generate(bumperbot, {})
    assert len(files) == 1 and files[0].path == "bumperBot.dot"
    text = files[0].content.decode("utf-8")
    assert text.count("shape=box") == 5
    assert '"bumperBot.sensor" -> "bumperBot.controller" [label="Boolean"];' in text
    assert text.count(" -> ") == 5


def test_dot_single_atomic():
    unit = parse_text("component Solo { port out Boolean o; native; }")
    table = checked([unit])
    model = elaborate(table.components()["Solo"], table.globals)
    text = get_backend("dot").generate(model, {})[0].content.decode("utf-8")
    assert text.count("shape=box") == 1
    assert " -> " not in text


def test_dot_fan_out_shares_a_source():
    unit = parse_text("""
component Src { port out Boolean o; native; }
component Snk { port in Boolean i; rules { var Integer n = 0; [i = *] => {n = n + 1}; } }
component Fan {
  instance Src s;
  instance Snk a;
  instance Snk b;
  connect s.o -> a.i, b.i;
}
""")
    table = checked([unit])
    model = elaborate(table.components()["Fan"], table.globals)
    text = get_backend("dot").generate(model, {})[0].content.decode("utf-8")
    assert text.count('"fan.s" -> ') == 2
