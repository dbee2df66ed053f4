"""Semantics-preserving passes over unitary programs.

* ``rm_uskips``      -- skip elimination
* ``not_propagation`` -- slide X gates right through commuting instructions
  and cancel matching pairs
* ``map_to_lnn``     -- insert SWAP chains so every CNOT acts on neighbours

All passes take and return unitary programs.  :func:`run_passes` is the
driver used by the CLI; it rejects programs with ``meas``/``reset``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

from .ir import (
    App,
    GateName,
    Instruction,
    Program,
    Seq,
    Skip,
    UnitaryProgram,
    cnot,
    count_ops,
    flatten,
    fold,
    is_unitary_program,
    iter_leaves,
    seq,
    swap_macro,
)
from .linalg import DEFAULT_TOL
from .semantics import default_dim, uc_equiv_at


class PassError(ValueError):
    pass


def rm_uskips(c: UnitaryProgram) -> UnitaryProgram:
    """Remove every ``Skip`` unless the whole program reduces to one."""

    def combine(left, right):
        if isinstance(left, Skip):
            return right
        if isinstance(right, Skip):
            return left
        return Seq(left, right)

    return fold(c, lambda leaf: leaf, combine)


# -- NOT propagation ---------------------------------------------------------


def _single_qubit(leaf: Instruction) -> bool:
    return isinstance(leaf, App) and leaf.gate.arity == 1 and len(leaf.args) == 1


def _is_x(leaf: Instruction) -> bool:
    return _single_qubit(leaf) and leaf.gate.name is GateName.X


def _is_cnot(leaf: Instruction) -> bool:
    return (isinstance(leaf, App) and leaf.gate.name is GateName.CNOT
            and len(leaf.args) == 2 and leaf.args[0] != leaf.args[1])


def _x_commutes_with(q: int, leaf: Instruction) -> bool:
    """Whether ``X q`` may be swapped past ``leaf``.

    Licensed moves: past a CNOT targeting ``q``, past any 1-qubit gate on an
    other qubit, and past a CNOT not touching ``q``.
    """
    if isinstance(leaf, Skip):
        return True
    if _single_qubit(leaf):
        return leaf.args[0] != q
    if _is_cnot(leaf):
        return leaf.args[0] != q
    return False


def not_propagation(c: UnitaryProgram) -> UnitaryProgram:
    """Cancel X gates that can be commuted onto a partner X on the same qubit.

    An X without a reachable partner stays where it was.  If everything
    cancels the result is ``Skip``.
    """
    instrs = flatten(c)
    i = 0
    while i < len(instrs):
        leaf = instrs[i]
        if not _is_x(leaf):
            i += 1
            continue
        q = leaf.args[0]
        partner = None
        for j in range(i + 1, len(instrs)):
            nxt = instrs[j]
            if _is_x(nxt) and nxt.args[0] == q:
                partner = j
                break
            if not _x_commutes_with(q, nxt):
                break
        if partner is None:
            i += 1
            continue
        del instrs[partner]
        del instrs[i]
        # gates before i cannot gain a partner: only X gates were removed
    return seq(*instrs)


# -- LNN mapping -------------------------------------------------------------


def respects_lnn(c: UnitaryProgram) -> bool:
    """Every CNOT acts on register-adjacent qubits."""
    for leaf in iter_leaves(c):
        if isinstance(leaf, App) and leaf.gate.name is GateName.CNOT:
            if len(leaf.args) != 2 or abs(leaf.args[0] - leaf.args[1]) != 1:
                return False
    return True


def _route_cnot(ctrl: int, tgt: int) -> UnitaryProgram:
    step = 1 if ctrl < tgt else -1
    dest = tgt - step
    chain = [swap_macro(k, k + step) for k in range(ctrl, dest, step)]
    return seq(*chain, cnot(dest, tgt), *reversed(chain))


def map_to_lnn(c: UnitaryProgram) -> UnitaryProgram:
    """Move each distant CNOT's control next to its target, then move it back.

    Ill-typed CNOTs (wrong arity, repeated argument) pass through unchanged.
    """

    def leaf(instr):
        if _is_cnot(instr) and abs(instr.args[0] - instr.args[1]) > 1:
            return _route_cnot(*instr.args)
        return instr

    return fold(c, leaf, Seq)


# -- pass driver -------------------------------------------------------------

PASSES: dict[str, Callable[[UnitaryProgram], UnitaryProgram]] = {
    "rm-skip": rm_uskips,
    "not-prop": not_propagation,
    "lnn": map_to_lnn,
}


@dataclass(frozen=True)
class PassReport:
    name: str
    ops_in: int
    ops_out: int
    gates_removed: int
    gates_inserted: int
    verified: bool | None = None

    def to_jsonable(self) -> dict:
        return asdict(self)


def _gate_multiset(p: Program) -> Counter:
    return Counter(leaf for leaf in iter_leaves(p) if isinstance(leaf, App))


def report(name: str, before: Program, after: Program, verified: bool | None = None) -> PassReport:
    g_in, g_out = _gate_multiset(before), _gate_multiset(after)
    return PassReport(
        name=name,
        ops_in=count_ops(before),
        ops_out=count_ops(after),
        gates_removed=sum((g_in - g_out).values()),
        gates_inserted=sum((g_out - g_in).values()),
        verified=verified,
    )


def parse_pass_list(spec: str) -> list[str]:
    names = [s.strip() for s in spec.split(",") if s.strip()]
    unknown = [n for n in names if n not in PASSES]
    if unknown:
        raise PassError(f"unknown pass(es): {', '.join(unknown)}; choose from {', '.join(PASSES)}")
    if not names:
        raise PassError("empty pass list")
    return names


def run_passes(c: Program, names: Sequence[str], verify: bool = False, dim: int | None = None,
               tol: float = DEFAULT_TOL) -> tuple[UnitaryProgram, list[PassReport]]:
    """Apply the named passes in order.

    With ``verify`` each step is checked with :func:`uc_equiv_at` at ``dim``
    (default: the smallest register the input fits in).
    """
    if not is_unitary_program(c):
        raise PassError("passes apply to unitary programs only; found meas/reset")
    if dim is None:
        dim = default_dim(c)
    reports = []
    current = c
    for name in names:
        if name not in PASSES:
            raise PassError(f"unknown pass {name!r}")
        out = PASSES[name](current)
        verified = uc_equiv_at(current, out, dim, tol) if verify else None
        reports.append(report(name, current, out, verified))
        current = out
    return current, reports
