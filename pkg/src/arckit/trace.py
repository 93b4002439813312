"""Tick-indexed port traces and their JSON-lines serialization.

One line per tick: ``{"tick":N,"ports":{"<instancePath>.<port>":value}}``
with null encoding the absence token, port keys sorted, and no whitespace.
Output traces list every port so files are byte-stable for golden tests;
input traces may omit ports (absent) and whole ticks (all absent).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .model import Message


@dataclass(frozen=True)
class Trace:
    """A full record: ``rows[t][key]`` is the message on ``key`` at tick t."""

    ports: tuple[str, ...]
    rows: tuple[dict[str, Message], ...]

    def __post_init__(self):
        object.__setattr__(self, "ports", tuple(sorted(self.ports)))

    def __len__(self) -> int:
        return len(self.rows)

    def at(self, tick: int, key: str) -> Message:
        return self.rows[tick].get(key)

    def column(self, key: str) -> list[Message]:
        return [row.get(key) for row in self.rows]

    def to_lines(self) -> list[str]:
        lines = []
        for tick, row in enumerate(self.rows):
            ports = {key: row.get(key) for key in self.ports}
            lines.append(json.dumps({"tick": tick, "ports": ports}, separators=(",", ":")))
        return lines

    def dump(self) -> str:
        lines = self.to_lines()
        return "".join(line + "\n" for line in lines)

    def write(self, fp: IO[str]) -> None:
        fp.write(self.dump())

    def restricted(self, keys: Iterable[str]) -> "Trace":
        keys = tuple(sorted(set(keys) & set(self.ports)))
        return Trace(keys, tuple({k: row.get(k) for k in keys if row.get(k) is not None}
                                 for row in self.rows))


class TraceFormatError(ValueError):
    pass


def _check_value(value: object, where: str) -> Message:
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if value.is_integer():
            return int(value)
        raise TraceFormatError(f"{where}: non-integer number {value!r}")
    raise TraceFormatError(f"{where}: unsupported value {value!r}")


def parse_trace_lines(text: str, origin: str = "<trace>") -> dict[int, dict[str, Message]]:
    """Parse JSONL trace text into a sparse tick -> ports mapping. Raises
    TraceFormatError on malformed input."""
    schedule: dict[int, dict[str, Message]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        where = f"{origin}:{lineno}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceFormatError(f"{where}: {e.msg}")
        if not isinstance(obj, dict) or "tick" not in obj:
            raise TraceFormatError(f"{where}: expected an object with a 'tick' field")
        tick = obj["tick"]
        if not isinstance(tick, int) or isinstance(tick, bool) or tick < 0:
            raise TraceFormatError(f"{where}: 'tick' must be a non-negative integer")
        ports = obj.get("ports", {})
        if not isinstance(ports, dict):
            raise TraceFormatError(f"{where}: 'ports' must be an object")
        row = schedule.setdefault(tick, {})
        for key, value in ports.items():
            row[key] = _check_value(value, where)
    return schedule


def schedule_to_trace(schedule: Mapping[int, Mapping[str, Message]], ports: Iterable[str],
                      ticks: int) -> Trace:
    """Densify a sparse schedule into a fixed-length trace over ``ports``."""
    ports = tuple(sorted(ports))
    rows = []
    for t in range(ticks):
        row = {k: v for k, v in schedule.get(t, {}).items() if k in ports and v is not None}
        rows.append(row)
    return Trace(ports, tuple(rows))


def read_trace(path: str) -> dict[int, dict[str, Message]]:
    with open(path, "r", encoding="utf-8") as fp:
        return parse_trace_lines(fp.read(), path)
