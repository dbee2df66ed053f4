"""Example programs: superdense coding, GHZ, teleportation, Deutsch-Jozsa.

Deutsch-Jozsa oracles are described by :class:`OracleTree` and realised at
matrix level.  Qubit 0 is the answer qubit; the last qubit selects between
the two sub-oracles of a ``Node``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Union

import numpy as np

from . import linalg
from .ir import (
    Meas,
    Program,
    Reset,
    Skip,
    UnitaryProgram,
    cnot,
    cz_macro,
    h,
    seq,
    x,
    z,
)
from .semantics import denote_unitary


def bell00() -> UnitaryProgram:
    return seq(h(0), cnot(0, 1))


def encode(b1: int, b2: int) -> UnitaryProgram:
    return seq(x(0) if b2 else Skip(), z(0) if b1 else Skip())


def decode() -> UnitaryProgram:
    return seq(cnot(0, 1), h(0))


def superdense(b1: int, b2: int) -> UnitaryProgram:
    """Unitary part of superdense coding; maps ``|00>`` to ``|b1 b2>``."""
    return seq(bell00(), encode(b1, b2), decode())


def ghz_circuit(n: int) -> UnitaryProgram:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Skip()
    p: UnitaryProgram = h(0)
    for k in range(2, n + 1):
        p = seq(p, cnot(k - 2, k - 1))
    return p


def ghz_state(n: int) -> np.ndarray:
    if n == 0:
        return linalg.identity(1)
    return (linalg.basis_ket([0] * n) + linalg.basis_ket([1] * n)) / np.sqrt(2)


def teleport_program() -> Program:
    bell = seq(h(1), cnot(1, 2))
    alice = seq(cnot(0, 1), h(0), Meas(0), Meas(1))
    bob = seq(cnot(1, 2), cz_macro(0, 2), Reset(0), Reset(1))
    return seq(bell, alice, bob)


def cpar(n: int, g: Callable[[int], UnitaryProgram]) -> UnitaryProgram:
    """``g(0); g(1); ...; g(n-1)`` nested to the left, starting from ``Skip``."""
    p: UnitaryProgram = Skip()
    for k in range(n):
        p = seq(p, g(k))
    return p


# -- oracles -----------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    """Depth-0 oracle: identity (``f = 0``) or X on the answer qubit (``f = 1``)."""

    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("leaf value must be 0 or 1")

    depth = 0

    def __str__(self) -> str:
        return "X" if self.value else "I"


LeafI = Leaf(0)
LeafX = Leaf(1)


@dataclass(frozen=True)
class Node:
    """``f0`` on the last input bit 0, ``f1`` on 1."""

    f0: "OracleTree"
    f1: "OracleTree"

    def __post_init__(self):
        if self.f0.depth != self.f1.depth:
            raise ValueError(f"subtrees have different depths ({self.f0.depth}, {self.f1.depth})")

    @cached_property
    def depth(self) -> int:
        return 1 + self.f0.depth

    def __str__(self) -> str:
        return f"({self.f0},{self.f1})"


OracleTree = Union[Leaf, Node]


def oracle_matrix(t: OracleTree) -> np.ndarray:
    if isinstance(t, Leaf):
        return linalg.identity(2) if t.value == 0 else np.array([[0, 1], [1, 0]], dtype=linalg.DTYPE)
    return (linalg.kron(oracle_matrix(t.f0), linalg.ket_bra(0, 0))
            + linalg.kron(oracle_matrix(t.f1), linalg.ket_bra(1, 1)))


def oracle_count(t: OracleTree) -> int:
    """Number of inputs on which the Boolean function is 1."""
    if isinstance(t, Leaf):
        return t.value
    return oracle_count(t.f0) + oracle_count(t.f1)


def truth_table(t: OracleTree) -> dict[tuple[int, ...], int]:
    """``f(x1..xn)`` for every input; the last bit picks the subtree."""
    if isinstance(t, Leaf):
        return {(): t.value}
    out = {}
    for b, sub in ((0, t.f0), (1, t.f1)):
        for xs, v in truth_table(sub).items():
            out[xs + (b,)] = v
    return out


class Classification(str, enum.Enum):
    BALANCED = "balanced"
    CONSTANT = "constant"
    NEITHER = "neither"


def classify_oracle(t: OracleTree) -> Classification:
    count, dim = oracle_count(t), t.depth
    if count in (0, 2 ** dim):
        return Classification.CONSTANT
    if dim >= 1 and count == 2 ** (dim - 1):
        return Classification.BALANCED
    return Classification.NEITHER


def all_oracle_trees(depth: int) -> Iterator[OracleTree]:
    """Every tree of the given depth (there are ``2^(2^depth)``)."""
    if depth == 0:
        yield LeafI
        yield LeafX
        return
    subs = list(all_oracle_trees(depth - 1))
    for f0, f1 in itertools.product(subs, repeat=2):
        yield Node(f0, f1)


def random_oracle_tree(depth: int, rng: np.random.Generator) -> OracleTree:
    if depth == 0:
        return LeafX if rng.integers(2) else LeafI
    return Node(random_oracle_tree(depth - 1, rng), random_oracle_tree(depth - 1, rng))


def constant_oracle(depth: int, value: int) -> OracleTree:
    t: OracleTree = Leaf(value)
    for _ in range(depth):
        t = Node(t, t)
    return t


class OracleSyntaxError(ValueError):
    pass


def parse_oracle(text: str) -> OracleTree:
    """Parse ``"I" | "X" | "(" tree "," tree ")"``; whitespace is ignored."""
    s = "".join(text.split())
    pos = 0

    def tree() -> OracleTree:
        nonlocal pos
        if pos >= len(s):
            raise OracleSyntaxError("unexpected end of oracle")
        ch = s[pos]
        if ch in "IX":
            pos += 1
            return LeafI if ch == "I" else LeafX
        if ch != "(":
            raise OracleSyntaxError(f"unexpected {ch!r} at offset {pos}")
        pos += 1
        left = tree()
        expect(",")
        right = tree()
        expect(")")
        try:
            return Node(left, right)
        except ValueError as e:
            raise OracleSyntaxError(str(e)) from None

    def expect(ch: str) -> None:
        nonlocal pos
        if pos >= len(s) or s[pos] != ch:
            found = s[pos] if pos < len(s) else "end of input"
            raise OracleSyntaxError(f"expected {ch!r} at offset {pos}, found {found!r}")
        pos += 1

    result = tree()
    if pos != len(s):
        raise OracleSyntaxError(f"trailing input at offset {pos}")
    return result


# -- Deutsch-Jozsa -----------------------------------------------------------


def deutsch_jozsa_matrix(t: OracleTree) -> np.ndarray:
    """``X 0; cpar n H; U; cpar n H`` on ``n = 1 + depth`` qubits.

    The gate-level stages are denoted normally and the oracle matrix is
    spliced in between them.
    """
    n = 1 + t.depth
    prep = denote_unitary(seq(x(0), cpar(n, h)), n)
    layer = denote_unitary(cpar(n, h), n)
    return layer @ oracle_matrix(t) @ prep


class DJInconsistency(RuntimeError):
    """Simulation and closed form disagree; indicates an implementation bug."""


@dataclass(frozen=True)
class DJReport:
    dim: int
    count: int
    classification: Classification
    amplitude: float
    expected_amplitude: float
    accept_probability: float

    def to_jsonable(self) -> dict:
        return {
            "dim": self.dim,
            "count": self.count,
            "classification": self.classification.value,
            "amplitude": self.amplitude,
            "expected_amplitude": self.expected_amplitude,
            "accept_probability": self.accept_probability,
        }


def dj_report(t: OracleTree, tol: float = linalg.DEFAULT_TOL) -> DJReport:
    dim = t.depth
    count = oracle_count(t)
    out = deutsch_jozsa_matrix(t) @ linalg.basis_ket([0] * (1 + dim))
    # <1, 0^dim| picks index 2^dim
    amp = complex(out[2 ** dim, 0])
    expected = 1 - 2 * count / 2 ** dim
    if abs(amp - expected) > tol:
        raise DJInconsistency(f"simulated amplitude {amp} differs from 1 - 2*{count}/2^{dim} = {expected}")
    proj = linalg.kron(linalg.identity(2), linalg.kron_all([linalg.ket_bra(0, 0)] * dim))
    accept = linalg.norm(proj @ out) ** 2
    return DJReport(dim, count, classify_oracle(t), amp.real, expected, accept)
