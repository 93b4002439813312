"""Exception types shared across the toolchain."""

from __future__ import annotations


class ArcError(Exception):
    """Base class for all toolchain errors."""


class ArityMismatch(ArcError):
    pass


class TypeMismatch(ArcError):
    pass


class UnresolvedReference(ArcError):
    pass


class MissingBinding(ArcError):
    def __init__(self, path: str):
        super().__init__(f"no native binding for instance '{path}'")
        self.path = path


class EvalError(ArcError):
    """Expression evaluation failure (overflow, division by zero, absent read).

    ``path`` and ``tick`` are filled in by the simulator once the failing
    component and time slot are known.
    """

    def __init__(self, message: str, path: str | None = None, tick: int | None = None):
        self.reason = message
        self.path = path
        self.tick = tick
        super().__init__(self._format())

    def _format(self) -> str:
        where = ""
        if self.path is not None:
            where += f" in '{self.path}'"
        if self.tick is not None:
            where += f" at tick {self.tick}"
        return self.reason + where

    def with_context(self, path: str, tick: int | None) -> "EvalError":
        err = type(self)(self.reason, path=path, tick=tick)
        return err


class InitEvalError(EvalError):
    """Evaluation failure inside a variable's or output's init expression."""


class MissingSlot(ArcError):
    def __init__(self, name: str):
        super().__init__(f"unfilled template slot '{name}'")
        self.slot = name


class UnsupportedConstruct(ArcError):
    pass
