"""Code generation framework.

A backend is a pure function from an elaborated instance model to a list of
files; ``emit`` is the only place that touches the filesystem. Files are
either Generated (owned by the generator, always safe to overwrite) or
UserStub (created once as a skeleton for hand-written code and never touched
again), which is what lets hand-written implementations survive regeneration.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Mapping, Protocol

from ..model import InstanceModel

GENERATED = "generated"
USER_STUB = "userStub"

GENERATOR_NAME = "arckit"
GENERATOR_VERSION = "1.0.0"


@dataclass(frozen=True)
class GeneratedFile:
    path: str  # relative, forward slashes
    content: bytes
    kind: str  # GENERATED | USER_STUB


class Backend(Protocol):
    name: str

    def generate(self, model: InstanceModel, options: Mapping[str, str]) -> list[GeneratedFile]:
        """Pure: no filesystem, clock or environment access; deterministic."""
        ...


@dataclass
class WriteReport:
    written: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    unchanged: list[str] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        return (f"written={len(self.written)} skipped={len(self.skipped)} "
                f"unchanged={len(self.unchanged)} errors={len(self.errors)}")


def emit(files: list[GeneratedFile], out_dir: str) -> WriteReport:
    """Write a generation result into ``out_dir``.

    Generated files are (over)written whenever their bytes changed and
    reported unchanged otherwise. UserStub files are written only if absent;
    an existing stub that differs from the skeleton is reported skipped and
    preserved byte for byte. I/O problems are collected per path, not raised.
    """
    report = WriteReport()
    seen: set[str] = set()
    for f in files:
        if f.path in seen:
            report.errors.append((f.path, "duplicate path in generation result"))
            continue
        seen.add(f.path)
        target = os.path.join(out_dir, *f.path.split("/"))
        try:
            existing: bytes | None = None
            if os.path.exists(target):
                with open(target, "rb") as fp:
                    existing = fp.read()
            if existing is not None and existing == f.content:
                report.unchanged.append(f.path)
                continue
            if existing is not None and f.kind == USER_STUB:
                report.skipped.append(f.path)
                continue
            os.makedirs(os.path.dirname(target) or ".", exist_ok=True)
            with open(target, "wb") as fp:
                fp.write(f.content)
            report.written.append(f.path)
        except OSError as e:
            report.errors.append((f.path, str(e)))
    return report


_BACKENDS: dict[str, Callable[[], Backend]] = {}


def register_backend(name: str, factory: Callable[[], Backend]) -> None:
    _BACKENDS[name] = factory


def get_backend(name: str) -> Backend:
    try:
        return _BACKENDS[name]()
    except KeyError:
        raise KeyError(f"unknown backend '{name}' (available: {', '.join(sorted(_BACKENDS))})")


def backend_names() -> list[str]:
    return sorted(_BACKENDS)


from . import dot, reference  # noqa: E402  (registers the built-in backends)
