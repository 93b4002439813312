from __future__ import annotations

import pathlib

import pytest

from arckit.checker import check, has_errors
from arckit.model import elaborate
from arckit.parser import parse

ROOT = pathlib.Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
GOLDEN = MODELS / "golden"
INVALID = MODELS / "invalid"

CORPUS_FILES = [MODELS / "bumperbot.arc", MODELS / "lib.arc"]


def parse_file(path: pathlib.Path):
    result = parse(path.read_text(), str(path))
    assert result.ok, [d.render() for d in result.diagnostics]
    return result.unit


def parse_text(text: str, origin: str = "<test>"):
    result = parse(text, origin)
    assert result.ok, [d.render() for d in result.diagnostics]
    return result.unit


def checked(units):
    table, diagnostics = check(units)
    assert not has_errors(diagnostics), [d.render() for d in diagnostics]
    return table


@pytest.fixture(scope="session")
def corpus_units():
    return [parse_file(p) for p in CORPUS_FILES]


@pytest.fixture(scope="session")
def corpus_table(corpus_units):
    return checked(corpus_units)


@pytest.fixture(scope="session")
def bumperbot(corpus_table):
    return elaborate(corpus_table.components()["BumperBot"], corpus_table.globals)
