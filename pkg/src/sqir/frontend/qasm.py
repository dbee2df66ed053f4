"""Import and export of a small OpenQASM 2.0 subset.

Accepted::

    OPENQASM 2.0;
    include "qelib1.inc";        // optional
    qreg q[N];                   // exactly one
    creg c[M];                   // at most one
    h q[i];  x q[i];  y q[i];  z q[i];
    u1(expr) q[i];               // expr: reals, pi, + - * / and parentheses
    cx q[i],q[j];
    measure q[i] -> c[j];
    reset q[i];

``u1`` maps to ``R``.  Measurement targets are kept as metadata only because
SQIR measurement stores no classical bit.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..ir import CNOT, H, App, Instruction, Meas, R, Reset, Skip, X, Y, Z, GateName
from .native import ParseError, SourceFile

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<newline>\n)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)(?:[eE][+-]?[0-9]+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<punct>[;,\[\]()+\-*/])
  | (?P<other>==|[{}=<>!])      # lexed only so unsupported syntax gets a parser message
  """,
    re.VERBOSE,
)

_ONE_QUBIT = {"h": H, "x": X, "y": Y, "z": Z}
_QASM_NAME = {GateName.H: "h", GateName.X: "x", GateName.Y: "y", GateName.Z: "z"}
_UNSUPPORTED = {
    "gate": "custom gate definitions",
    "opaque": "opaque gates",
    "if": "classically controlled operations",
    "barrier": "barriers",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.qreg: tuple[str, int] | None = None
        self.creg: tuple[str, int] | None = None
        self.statements: list[Instruction] = []
        self.spans: list[int] = []
        self.targets: list[tuple[int, int]] = []

    # token helpers

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek() or (self.tokens[-1] if self.tokens else None)
        if tok is None:
            return ParseError(message, 1, 1)
        return ParseError(message, tok.line, tok.column)

    def next(self, what: str = "token") -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error(f"unexpected end of input, expected {what}")
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next(repr(text))
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text!r}", tok)
        return tok

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.next(what)
        if tok.kind != kind:
            raise self.error(f"expected {what}, found {tok.text!r}", tok)
        return tok

    def natural(self, what: str) -> int:
        tok = self.expect_kind("real", what)
        if not tok.text.isdigit():
            raise self.error(f"expected {what}, found {tok.text!r}", tok)
        return int(tok.text)

    # expressions

    def expr(self) -> float:
        value = self.term()
        while self.peek() is not None and self.peek().text in "+-" and self.peek().kind == "punct":
            op = self.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.unary()
        while self.peek() is not None and self.peek().text in "*/" and self.peek().kind == "punct":
            op_tok = self.next()
            rhs = self.unary()
            if op_tok.text == "*":
                value *= rhs
            else:
                if rhs == 0:
                    raise self.error("division by zero", op_tok)
                value /= rhs
        return value

    def unary(self) -> float:
        tok = self.peek()
        if tok is not None and tok.kind == "punct" and tok.text in "+-":
            self.next()
            v = self.unary()
            return -v if tok.text == "-" else v
        return self.primary()

    def primary(self) -> float:
        tok = self.next("expression")
        if tok.kind == "real":
            return float(tok.text)
        if tok.kind == "ident" and tok.text == "pi":
            return math.pi
        if tok.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise self.error(f"unsupported expression element {tok.text!r}", tok)

    # registers

    def register_decl(self, tok: Token) -> tuple[str, int]:
        name = self.expect_kind("ident", "register name").text
        self.expect("[")
        size = self.natural("register size")
        self.expect("]")
        self.expect(";")
        return name, size

    def qubit(self) -> int:
        tok = self.expect_kind("ident", "qubit reference")
        if self.qreg is None:
            raise self.error("qubit used before 'qreg' declaration", tok)
        if tok.text != self.qreg[0]:
            raise self.error(f"unknown quantum register {tok.text!r}", tok)
        self.expect("[")
        idx_tok = self.peek()
        idx = self.natural("qubit index")
        self.expect("]")
        if idx >= self.qreg[1]:
            raise self.error(f"index {idx} out of range for {self.qreg[0]}[{self.qreg[1]}]", idx_tok)
        return idx

    def clbit(self) -> int:
        tok = self.expect_kind("ident", "classical bit reference")
        if self.creg is None or tok.text != self.creg[0]:
            raise self.error(f"unknown classical register {tok.text!r}", tok)
        self.expect("[")
        idx_tok = self.peek()
        idx = self.natural("bit index")
        self.expect("]")
        if idx >= self.creg[1]:
            raise self.error(f"index {idx} out of range for {self.creg[0]}[{self.creg[1]}]", idx_tok)
        return idx

    def emit(self, s: Instruction, tok: Token) -> None:
        self.statements.append(s)
        self.spans.append(tok.line)

    # statements

    def parse(self) -> SourceFile:
        head = self.peek()
        if head is None or head.text != "OPENQASM":
            raise self.error("program must start with 'OPENQASM 2.0;'")
        self.next()
        version = self.expect_kind("real", "version")
        if version.text != "2.0":
            raise self.error(f"unsupported OpenQASM version {version.text}", version)
        self.expect(";")
        included = False
        while self.peek() is not None:
            tok = self.next()
            word = tok.text
            if tok.kind != "ident":
                raise self.error(f"unexpected {word!r}", tok)
            if word == "include":
                path = self.expect_kind("string", "include path")
                if path.text != '"qelib1.inc"' or included:
                    raise self.error(f"unsupported include {path.text}", path)
                self.expect(";")
                included = True
            elif word == "qreg":
                if self.qreg is not None:
                    raise self.error("multiple quantum registers are not supported", tok)
                self.qreg = self.register_decl(tok)
            elif word == "creg":
                if self.creg is not None:
                    raise self.error("multiple classical registers are not supported", tok)
                self.creg = self.register_decl(tok)
            elif word in _ONE_QUBIT:
                q = self.qubit()
                self.expect(";")
                self.emit(App(_ONE_QUBIT[word], (q,)), tok)
            elif word == "u1":
                self.expect("(")
                phi = self.expr()
                self.expect(")")
                q = self.qubit()
                self.expect(";")
                self.emit(App(R(phi), (q,)), tok)
            elif word == "cx":
                c = self.qubit()
                self.expect(",")
                t = self.qubit()
                self.expect(";")
                self.emit(App(CNOT, (c, t)), tok)
            elif word == "measure":
                q = self.qubit()
                self.expect("->")
                bit = self.clbit()
                self.expect(";")
                self.targets.append((len(self.statements), bit))
                self.emit(Meas(q), tok)
            elif word == "reset":
                q = self.qubit()
                self.expect(";")
                self.emit(Reset(q), tok)
            elif word in _UNSUPPORTED:
                raise self.error(f"{_UNSUPPORTED[word]} are outside the supported subset", tok)
            else:
                raise self.error(f"unsupported gate or statement {word!r}", tok)
        if self.qreg is None:
            raise self.error("missing 'qreg' declaration")
        return SourceFile(self.qreg[1], tuple(self.statements), tuple(self.spans), tuple(self.targets))


def import_qasm(text: str) -> SourceFile:
    return _Parser(text).parse()


def _phase(phi: float) -> str:
    return f"{phi:.17g}"


def export_qasm(f: SourceFile) -> str:
    """Emit the subset; ``skip`` is dropped and ``meas q`` targets ``c[q]``."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{f.dim}];"]
    if any(isinstance(s, Meas) for s in f.statements):
        lines.append(f"creg c[{f.dim}];")
    for s in f.statements:
        if isinstance(s, Skip):
            continue
        if isinstance(s, Meas):
            lines.append(f"measure q[{s.q}] -> c[{s.q}];")
        elif isinstance(s, Reset):
            lines.append(f"reset q[{s.q}];")
        elif s.gate.name is GateName.CNOT:
            c, t = s.args
            lines.append(f"cx q[{c}],q[{t}];")
        elif s.gate.name is GateName.R:
            lines.append(f"u1({_phase(s.gate.phi)}) q[{s.args[0]}];")
        else:
            lines.append(f"{_QASM_NAME[s.gate.name]} q[{s.args[0]}];")
    return "\n".join(lines) + "\n"
