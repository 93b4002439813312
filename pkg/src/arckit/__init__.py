"""Toolchain for a textual component & connector architecture language:
parse `.arc` models, check them, simulate them deterministically, and
generate runnable code."""

from .checker import SymbolTable, check, has_errors
from .errors import (
    ArcError, ArityMismatch, EvalError, InitEvalError, MissingBinding,
    MissingSlot, TypeMismatch, UnresolvedReference, UnsupportedConstruct,
)
from .flatten import flatten
from .model import (
    InstanceModel, InstanceNode, Message, Value, elaborate, substitute,
)
from .parser import Diagnostic, ParseResult, SourceUnit, parse, pretty
from .sim import NativeImpl, RuntimeState, ScriptedStub, init_runtime, run, step
from .trace import Trace, TraceFormatError, read_trace

__version__ = "1.0.0"

__all__ = [
    "ArcError", "ArityMismatch", "Diagnostic", "EvalError", "InitEvalError",
    "InstanceModel", "InstanceNode", "Message", "MissingBinding", "MissingSlot",
    "NativeImpl", "ParseResult", "RuntimeState", "ScriptedStub", "SourceUnit",
    "SymbolTable", "Trace", "TraceFormatError", "TypeMismatch",
    "UnresolvedReference", "UnsupportedConstruct", "Value",
    "check", "elaborate", "flatten", "has_errors", "init_runtime", "parse",
    "pretty", "read_trace", "run", "step", "substitute",
]
