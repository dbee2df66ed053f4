"""The native line-oriented SQIR text format.

::

    sqir 1
    qubits 2
    # comment
    h 0
    cnot 0 1

One statement per line; ``#`` starts a comment.  The statement list is
right-nested into ``Seq`` nodes when converted to a program.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..ir import (
    App,
    CNOT,
    H,
    Instruction,
    Meas,
    Program,
    R,
    Reset,
    Skip,
    X,
    Y,
    Z,
    GateName,
    flatten,
    seq,
)

FORMAT_VERSION = "1"

_NAT = re.compile(r"[0-9]+\Z")
_REAL = re.compile(r"[+-]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?\Z")

_ONE_QUBIT = {"h": H, "x": X, "y": Y, "z": Z}
_MNEMONIC = {GateName.H: "h", GateName.X: "x", GateName.Y: "y", GateName.Z: "z"}


class ParseError(ValueError):
    """Malformed source text, located by 1-based line (and column when known)."""

    def __init__(self, message: str, line: int, column: int | None = None):
        self.line = line
        self.column = column
        self.bare_message = message
        where = f"line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class SourceFile:
    """A parsed program: register size plus a flat statement list.

    ``spans`` (1-based source lines) are diagnostic metadata and do not take
    part in equality.
    """

    dim: int
    statements: tuple[Instruction, ...]
    spans: tuple[int, ...] = field(default=(), compare=False)
    # (statement index, classical bit) for imported QASM measurements
    classical_targets: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    @property
    def program(self) -> Program:
        return seq(*self.statements)

    @classmethod
    def from_program(cls, p: Program, dim: int) -> "SourceFile":
        return cls(dim, tuple(flatten(p)))

    def line_of(self, index: int) -> int | None:
        return self.spans[index] if index < len(self.spans) else None


def _nat(tok: str, lineno: int, what: str = "qubit index") -> int:
    if not _NAT.match(tok):
        raise ParseError(f"expected {what}, found {tok!r}", lineno)
    return int(tok)


def _statement(words: list[str], lineno: int) -> Instruction:
    op, args = words[0], words[1:]

    def want(n: int) -> None:
        if len(args) != n:
            raise ParseError(f"'{op}' takes {n} operand(s), got {len(args)}", lineno)

    if op == "skip":
        want(0)
        return Skip()
    if op in _ONE_QUBIT:
        want(1)
        return App(_ONE_QUBIT[op], (_nat(args[0], lineno),))
    if op == "r":
        want(2)
        if not _REAL.match(args[0]):
            raise ParseError(f"expected a real phase, found {args[0]!r}", lineno)
        return App(R(float(args[0])), (_nat(args[1], lineno),))
    if op == "cnot":
        want(2)
        return App(CNOT, (_nat(args[0], lineno), _nat(args[1], lineno)))
    if op == "meas":
        want(1)
        return Meas(_nat(args[0], lineno))
    if op == "reset":
        want(1)
        return Reset(_nat(args[0], lineno))
    raise ParseError(f"unknown statement {op!r}", lineno)


def parse_native(text: str) -> SourceFile:
    version_seen = False
    dim: int | None = None
    statements: list[Instruction] = []
    spans: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        head = words[0]
        if head == "sqir":
            if version_seen:
                raise ParseError("duplicate 'sqir' header", lineno)
            if statements or dim is not None:
                raise ParseError("'sqir' header must come first", lineno)
            if len(words) != 2 or words[1] != FORMAT_VERSION:
                raise ParseError(f"expected 'sqir {FORMAT_VERSION}'", lineno)
            version_seen = True
            continue
        if head == "qubits":
            if not version_seen:
                raise ParseError("missing 'sqir 1' header", lineno)
            if dim is not None:
                raise ParseError("duplicate 'qubits' header", lineno)
            if len(words) != 2:
                raise ParseError("expected 'qubits N'", lineno)
            dim = _nat(words[1], lineno, "qubit count")
            continue
        if not version_seen:
            raise ParseError("missing 'sqir 1' header", lineno)
        if dim is None:
            raise ParseError("missing 'qubits N' header", lineno)
        statements.append(_statement(words, lineno))
        spans.append(lineno)
    if not version_seen:
        raise ParseError("missing 'sqir 1' header", 1)
    if dim is None:
        raise ParseError("missing 'qubits N' header", max(1, len(text.splitlines())))
    return SourceFile(dim, tuple(statements), tuple(spans))


def format_phase(phi: float) -> str:
    return f"{phi:.17g}"


def format_statement(s: Instruction) -> str:
    if isinstance(s, Skip):
        return "skip"
    if isinstance(s, Meas):
        return f"meas {s.q}"
    if isinstance(s, Reset):
        return f"reset {s.q}"
    args = " ".join(str(q) for q in s.args)
    if s.gate.name is GateName.R:
        return f"r {format_phase(s.gate.phi)} {args}"
    if s.gate.name is GateName.CNOT:
        return f"cnot {args}"
    return f"{_MNEMONIC[s.gate.name]} {args}"


def print_native(f: SourceFile | Program, dim: int | None = None) -> str:
    """Canonical text: header, then one flattened statement per line."""
    if not isinstance(f, SourceFile):
        if dim is None:
            raise TypeError("dim is required when printing a bare program")
        f = SourceFile.from_program(f, dim)
    lines = [f"sqir {FORMAT_VERSION}", f"qubits {f.dim}"]
    lines.extend(format_statement(s) for s in f.statements)
    return "\n".join(lines) + "\n"
