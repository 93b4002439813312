"""Static runtime assets copied into every generated project.

Assets are template text with ``@SLOT@`` placeholders; ``render`` fills the
slots and guarantees none remain. Templates load once at import so backends
stay free of filesystem access.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from ..errors import MissingSlot

_SLOT_RE = re.compile(r"@([A-Z][A-Z0-9_]*)@")


@dataclass(frozen=True)
class ScaffoldAsset:
    path: str  # destination path relative to the project's source dir
    template: str

    @property
    def slots(self) -> frozenset[str]:
        return frozenset(_SLOT_RE.findall(self.template))


def render(asset: ScaffoldAsset, slots: Mapping[str, str]) -> bytes:
    """Deterministic slot substitution; unfilled slots raise MissingSlot."""

    def replace(match: re.Match) -> str:
        name = match.group(1)
        if name not in slots:
            raise MissingSlot(name)
        return str(slots[name])

    return _SLOT_RE.sub(replace, asset.template).encode("utf-8")


def _load(name: str) -> str:
    return (resources.files(__package__) / "templates" / name).read_text(encoding="utf-8")


RUNTIME_ASSETS: tuple[ScaffoldAsset, ...] = (
    ScaffoldAsset("runtime/values.ts", _load("values.ts.tpl")),
    ScaffoldAsset("runtime/trace.ts", _load("trace.ts.tpl")),
    ScaffoldAsset("runtime/scheduler.ts", _load("scheduler.ts.tpl")),
    ScaffoldAsset("runtime/node.d.ts", _load("node.d.ts.tpl")),
)

MAIN_ASSET = ScaffoldAsset("main.ts", _load("main.ts.tpl"))
TSCONFIG_ASSET = ScaffoldAsset("tsconfig.json", _load("tsconfig.json.tpl"))
