"""SQIR abstract syntax, the well-typedness judgment, and structural operations.

Programs are immutable trees built from :class:`Skip`, :class:`Seq`,
:class:`App`, :class:`Meas` and :class:`Reset`.  A *unitary* program is one
without ``Meas``/``Reset`` nodes.  Sequencing is a binary node; use
:func:`flatten` and :func:`seq` to move between the tree and the list view.

Traversals are iterative so that long parsed programs (deep right-nested
``Seq`` spines) do not hit the interpreter recursion limit.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence, TypeVar, Union


class GateName(str, enum.Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    R = "R"
    CNOT = "CNOT"


_ARITY = {
    GateName.H: 1,
    GateName.X: 1,
    GateName.Y: 1,
    GateName.Z: 1,
    GateName.R: 1,
    GateName.CNOT: 2,
}


@dataclass(frozen=True)
class Gate:
    """One of the fixed gates ``H, X, Y, Z, R(phi), CNOT``.

    ``phi`` is meaningful for ``R`` only and is kept at 0.0 otherwise.
    """

    name: GateName
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "name", GateName(self.name))
        if self.name is not GateName.R and self.phi != 0.0:
            raise ValueError(f"gate {self.name.value} takes no phase")
        if not math.isfinite(self.phi):
            raise ValueError("phase must be finite")

    @property
    def arity(self) -> int:
        return _ARITY[self.name]

    def __str__(self) -> str:
        if self.name is GateName.R:
            return f"R({self.phi!r})"
        return self.name.value


H = Gate(GateName.H)
X = Gate(GateName.X)
Y = Gate(GateName.Y)
Z = Gate(GateName.Z)
CNOT = Gate(GateName.CNOT)


def R(phi: float) -> Gate:
    return Gate(GateName.R, float(phi))


# -- AST nodes ---------------------------------------------------------------


@dataclass(frozen=True)
class Skip:
    def __str__(self) -> str:
        return "skip"


@dataclass(frozen=True)
class Seq:
    left: "Program"
    right: "Program"

    def __str__(self) -> str:
        return f"({self.left}; {self.right})"


@dataclass(frozen=True)
class App:
    gate: Gate
    args: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(int(a) for a in self.args))

    def __str__(self) -> str:
        return " ".join([str(self.gate), *map(str, self.args)])


@dataclass(frozen=True)
class Meas:
    q: int

    def __str__(self) -> str:
        return f"meas {self.q}"


@dataclass(frozen=True)
class Reset:
    q: int

    def __str__(self) -> str:
        return f"reset {self.q}"


Instruction = Union[Skip, App, Meas, Reset]
UnitaryProgram = Union[Skip, Seq, App]
Program = Union[Skip, Seq, App, Meas, Reset]

def app(gate: Gate, *args: int) -> App:
    return App(gate, tuple(args))


def h(q: int) -> App:
    return App(H, (q,))


def x(q: int) -> App:
    return App(X, (q,))


def y(q: int) -> App:
    return App(Y, (q,))


def z(q: int) -> App:
    return App(Z, (q,))


def r(phi: float, q: int) -> App:
    return App(R(phi), (q,))


def cnot(c: int, t: int) -> App:
    return App(CNOT, (c, t))


def seq(*parts: Program) -> Program:
    """Right-nest ``parts`` into a ``Seq`` spine; no parts gives ``Skip``."""
    if not parts:
        return Skip()
    result = parts[-1]
    for p in reversed(parts[:-1]):
        result = Seq(p, result)
    return result


def seq_list(parts: Sequence[Program]) -> Program:
    return seq(*parts)


# -- traversal ---------------------------------------------------------------

T = TypeVar("T")


def iter_leaves(p: Program) -> Iterator[Instruction]:
    """Leaves of ``p`` from left to right."""
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, Seq):
            stack.append(node.right)
            stack.append(node.left)
        else:
            yield node


def iter_leaves_with_paths(p: Program) -> Iterator[tuple[tuple[str, ...], Instruction]]:
    """Leaves with their AST path, a tuple of ``"L"``/``"R"`` choices from the root."""
    stack: list[tuple[tuple[str, ...], Program]] = [((), p)]
    while stack:
        path, node = stack.pop()
        if isinstance(node, Seq):
            stack.append((path + ("R",), node.right))
            stack.append((path + ("L",), node.left))
        else:
            yield path, node


def fold(p: Program, leaf: Callable[[Instruction], T], combine: Callable[[T, T], T]) -> T:
    """Bottom-up fold: ``leaf`` on every leaf, ``combine(left, right)`` at every ``Seq``."""
    out: list[T] = []
    stack: list[tuple[Program, bool]] = [(p, False)]
    while stack:
        node, expanded = stack.pop()
        if not isinstance(node, Seq):
            out.append(leaf(node))
        elif expanded:
            right = out.pop()
            left = out.pop()
            out.append(combine(left, right))
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return out[0]


def flatten(p: Program) -> list[Instruction]:
    """Left-to-right leaf list; ``seq_list(flatten(p))`` is equivalent to ``p``."""
    return list(iter_leaves(p))


def count_ops(p: Program) -> int:
    """Number of leaves: ``Skip`` and gate applications count one each."""
    return sum(1 for _ in iter_leaves(p))


def is_skip_free(p: Program) -> bool:
    return not any(isinstance(leaf, Skip) for leaf in iter_leaves(p))


def is_unitary_program(p: Program) -> bool:
    return not any(isinstance(leaf, (Meas, Reset)) for leaf in iter_leaves(p))


def leaf_qubits(leaf: Instruction) -> tuple[int, ...]:
    if isinstance(leaf, App):
        return leaf.args
    if isinstance(leaf, (Meas, Reset)):
        return (leaf.q,)
    return ()


def qubits_used(p: Program) -> set[int]:
    used: set[int] = set()
    for leaf in iter_leaves(p):
        used.update(leaf_qubits(leaf))
    return used


def min_dim(p: Program) -> int:
    """Smallest register size that contains every index ``p`` mentions."""
    used = [q for q in qubits_used(p) if q >= 0]
    return max(used) + 1 if used else 0


def gate_count(p: Program) -> int:
    return sum(1 for leaf in iter_leaves(p) if isinstance(leaf, App))


# -- typing ------------------------------------------------------------------


class TypeErrorCause(str, enum.Enum):
    ARITY_MISMATCH = "ArityMismatch"
    INDEX_OUT_OF_BOUNDS = "IndexOutOfBounds"
    DUPLICATE_ARGUMENT = "DuplicateArgument"


@dataclass(frozen=True)
class TypeDiagnostic:
    """One violated clause of the gate-application typing rule, located by AST path."""

    location: tuple[str, ...]
    cause: TypeErrorCause
    instruction: Instruction = field(compare=False)
    message: str = field(default="", compare=False)

    @property
    def path(self) -> str:
        return "".join(self.location) or "root"

    def __str__(self) -> str:
        return f"{self.cause.value} at {self.path}: {self.message}"


def _check_leaf(leaf: Instruction, dim: int) -> list[tuple[TypeErrorCause, str]]:
    problems: list[tuple[TypeErrorCause, str]] = []
    if isinstance(leaf, App):
        n = leaf.gate.arity
        if len(leaf.args) != n:
            problems.append((TypeErrorCause.ARITY_MISMATCH,
                             f"{leaf.gate} expects {n} argument(s), got {len(leaf.args)}"))
        bad = [q for q in leaf.args if not 0 <= q < dim]
        if bad:
            problems.append((TypeErrorCause.INDEX_OUT_OF_BOUNDS,
                             f"qubit(s) {', '.join(map(str, bad))} not below {dim}"))
        if len(set(leaf.args)) != len(leaf.args):
            problems.append((TypeErrorCause.DUPLICATE_ARGUMENT,
                             f"repeated argument in {leaf}"))
    elif isinstance(leaf, (Meas, Reset)):
        if not 0 <= leaf.q < dim:
            problems.append((TypeErrorCause.INDEX_OUT_OF_BOUNDS,
                             f"qubit {leaf.q} not below {dim}"))
    return problems


def well_typed(p: Program, dim: int) -> list[TypeDiagnostic]:
    """All typing violations of ``p`` at register size ``dim``, in program order.

    An empty list means ``p`` is well-typed.
    """
    errors = []
    for path, leaf in iter_leaves_with_paths(p):
        for cause, message in _check_leaf(leaf, dim):
            errors.append(TypeDiagnostic(path, cause, leaf, message))
    return errors


def is_well_typed(p: Program, dim: int) -> bool:
    return all(not _check_leaf(leaf, dim) for leaf in iter_leaves(p))


def leaf_well_typed(leaf: Instruction, dim: int) -> bool:
    return not _check_leaf(leaf, dim)


# -- composition -------------------------------------------------------------


def _map_leaf(f: Callable[[int], int], leaf: Instruction) -> Instruction:
    if isinstance(leaf, App):
        return App(leaf.gate, tuple(f(q) for q in leaf.args))
    if isinstance(leaf, Meas):
        return Meas(f(leaf.q))
    if isinstance(leaf, Reset):
        return Reset(f(leaf.q))
    return leaf


def map_qubits(f: Callable[[int], int], p: Program) -> Program:
    """Relabel every qubit index through ``f``, keeping the tree shape."""
    return fold(p, lambda leaf: _map_leaf(f, leaf), Seq)


def in_par(c1: UnitaryProgram, c2: UnitaryProgram, d1: int) -> UnitaryProgram:
    """Run ``c1`` on qubits ``0..d1-1`` and ``c2`` shifted up by ``d1``."""
    return Seq(c1, map_qubits(lambda q: q + d1, c2))


def swap_macro(a: int, b: int) -> UnitaryProgram:
    return seq(cnot(a, b), cnot(b, a), cnot(a, b))


def cz_macro(c: int, t: int) -> UnitaryProgram:
    """Controlled-Z as an H-conjugated CNOT."""
    return seq(h(t), cnot(c, t), h(t))


def format_program(p: Program) -> str:
    return "; ".join(str(leaf) for leaf in iter_leaves(p))
