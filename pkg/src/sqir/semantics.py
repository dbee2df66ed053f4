"""Executable semantics: unitary denotation, density-matrix evaluation, and
the non-deterministic (branching) semantics, plus equivalence checking.

Ill-typed gate applications denote the zero matrix.  The density evaluator
additionally emits an :class:`IllTypedWarning`; the branching evaluator raises
:class:`IllTypedProgramError` because a zero state would silently prune every
branch.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .ir import (
    App,
    Gate,
    GateName,
    Meas,
    Program,
    Reset,
    Skip,
    TypeDiagnostic,
    UnitaryProgram,
    iter_leaves,
    leaf_well_typed,
    min_dim,
    well_typed,
)

PRUNE_THRESHOLD = 1e-12

_S = 1 / np.sqrt(2)


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=linalg.DTYPE)
    a.setflags(write=False)
    return a


GATE_MATRICES = {
    GateName.H: _frozen([[_S, _S], [_S, -_S]]),
    GateName.X: _frozen([[0, 1], [1, 0]]),
    GateName.Y: _frozen([[0, -1j], [1j, 0]]),
    GateName.Z: _frozen([[1, 0], [0, -1]]),
    # |1><1| (x) X + |0><0| (x) I
    GateName.CNOT: _frozen([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
}

_P0 = _frozen(linalg.ket_bra(0, 0))
_P1 = _frozen(linalg.ket_bra(1, 1))
_LOWER = _frozen(linalg.ket_bra(0, 1))


class IllTypedProgramError(ValueError):
    """Raised where the zero-matrix convention would hide a typing error."""

    def __init__(self, diagnostics: Sequence[TypeDiagnostic], dim: int):
        self.diagnostics = list(diagnostics)
        self.dim = dim
        detail = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"program is ill-typed at dim {dim}: {detail}")


class IllTypedWarning(UserWarning):
    pass


def gate_matrix(gate: Gate) -> np.ndarray:
    """``R(phi)`` is ``diag(1, e^{i phi})``; the others come from the fixed table."""
    if gate.name is GateName.R:
        return np.diag([1.0, np.exp(1j * gate.phi)]).astype(linalg.DTYPE)
    return GATE_MATRICES[gate.name]


def ueval(gate: Gate, args: Sequence[int], dim: int) -> np.ndarray:
    """The ``2^dim`` matrix of one gate application, or zero if ill-typed."""
    args = tuple(args)
    if not leaf_well_typed(App(gate, args), dim):
        return linalg.zeros(2 ** dim)
    if gate.name is GateName.CNOT:
        c, t = args
        # projector sum works for any distinct pair, in either order
        return linalg.pad(_P0, c, dim) + linalg.pad(_P1, c, dim) @ linalg.pad(GATE_MATRICES[GateName.X], t, dim)
    return linalg.pad(gate_matrix(gate), args[0], dim)


def _check_unitary(p: Program) -> None:
    for leaf in iter_leaves(p):
        if isinstance(leaf, (Meas, Reset)):
            raise ValueError(f"'{leaf}' is not part of the unitary fragment")


def denote_unitary(p: UnitaryProgram, dim: int) -> np.ndarray:
    """``2^dim`` unitary of ``p``; ``P1; P2`` denotes ``[[P2]] @ [[P1]]``."""
    _check_unitary(p)
    n = 2 ** dim
    u = linalg.identity(n)
    for leaf in iter_leaves(p):
        if isinstance(leaf, Skip):
            continue
        if not leaf_well_typed(leaf, dim):
            return linalg.zeros(n)
        u = ueval(leaf.gate, leaf.args, dim) @ u
    return u


# -- statevector application -------------------------------------------------


def _as_column(psi: np.ndarray, dim: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=linalg.DTYPE)
    if psi.ndim == 1:
        psi = psi.reshape(-1, 1)
    if psi.shape != (2 ** dim, 1):
        raise ValueError(f"state has shape {psi.shape}, expected ({2 ** dim}, 1)")
    return psi


def _apply_leaf(tensor: np.ndarray, leaf: App, dim: int) -> np.ndarray:
    if leaf.gate.name is GateName.CNOT:
        c, t = leaf.args
        out = tensor.copy()
        index = [slice(None)] * dim
        index[c] = 1
        index = tuple(index)
        # ``out[index]`` drops axis c, so the target axis shifts down if above it
        out[index] = np.flip(tensor[index], axis=t if t < c else t - 1)
        return out
    q = leaf.args[0]
    moved = np.tensordot(gate_matrix(leaf.gate), tensor, axes=([1], [q]))
    return np.moveaxis(moved, 0, q)


def apply_unitary(p: UnitaryProgram, dim: int, psi: np.ndarray) -> np.ndarray:
    """``[[p]] @ psi`` computed gate by gate on the state tensor.

    Never forms a ``2^dim`` matrix, so it scales to larger registers than
    :func:`denote_unitary`.
    """
    _check_unitary(p)
    psi = _as_column(psi, dim)
    leaves = [leaf for leaf in iter_leaves(p) if not isinstance(leaf, Skip)]
    if not all(leaf_well_typed(leaf, dim) for leaf in leaves):
        return np.zeros_like(psi)
    tensor = psi.reshape([2] * dim) if dim else psi.reshape(())
    for leaf in leaves:
        tensor = _apply_leaf(tensor, leaf, dim)
    return tensor.reshape(-1, 1)


# -- density matrix semantics ------------------------------------------------


def eval_density(p: Program, dim: int, rho: np.ndarray) -> np.ndarray:
    """Density-matrix semantics of a full program (left operand runs first)."""
    n = 2 ** dim
    rho = np.asarray(rho, dtype=linalg.DTYPE)
    if rho.shape != (n, n):
        raise ValueError(f"density matrix has shape {rho.shape}, expected ({n}, {n})")
    diagnostics = well_typed(p, dim)
    if diagnostics:
        warnings.warn(str(IllTypedProgramError(diagnostics, dim)), IllTypedWarning, stacklevel=2)
        return linalg.zeros(n)
    for leaf in iter_leaves(p):
        if isinstance(leaf, App):
            u = ueval(leaf.gate, leaf.args, dim)
            rho = u @ rho @ linalg.adjoint(u)
        elif isinstance(leaf, Meas):
            p0 = linalg.pad(_P0, leaf.q, dim)
            p1 = linalg.pad(_P1, leaf.q, dim)
            rho = p0 @ rho @ p0 + p1 @ rho @ p1
        elif isinstance(leaf, Reset):
            p0 = linalg.pad(_P0, leaf.q, dim)
            lower = linalg.pad(_LOWER, leaf.q, dim)
            rho = p0 @ rho @ p0 + lower @ rho @ linalg.adjoint(lower)
    return rho


# -- non-deterministic semantics ---------------------------------------------


@dataclass(frozen=True)
class OutcomeBranch:
    """One measurement path with its unnormalized final state."""

    record: tuple[tuple[int, int], ...]
    state: np.ndarray

    @property
    def weight(self) -> float:
        return linalg.norm(self.state) ** 2

    def to_jsonable(self) -> dict:
        return {
            "record": [[q, b] for q, b in self.record],
            "weight": self.weight,
            "state": linalg.to_jsonable(self.state),
        }


def enumerate_outcomes(p: Program, dim: int, psi: np.ndarray,
                       prune: float = PRUNE_THRESHOLD) -> list[OutcomeBranch]:
    """Every terminating path of the branching semantics, bit-0 branches first.

    States are never rescaled.  A measurement outcome whose projected state
    has norm at most ``prune`` does not exist and is dropped.
    """
    psi = _as_column(psi, dim)
    diagnostics = well_typed(p, dim)
    if diagnostics:
        raise IllTypedProgramError(diagnostics, dim)
    branches: list[tuple[tuple[tuple[int, int], ...], np.ndarray]] = [((), psi)]
    for leaf in iter_leaves(p):
        if isinstance(leaf, Skip):
            continue
        if isinstance(leaf, App):
            u = ueval(leaf.gate, leaf.args, dim)
            branches = [(rec, u @ s) for rec, s in branches]
            continue
        p0 = linalg.pad(_P0, leaf.q, dim)
        p1 = linalg.pad(_P1, leaf.q, dim)
        lower = linalg.pad(_LOWER, leaf.q, dim) if isinstance(leaf, Reset) else None
        expanded = []
        # expanding in order keeps the depth-first, bit-0-first ordering
        for rec, s in branches:
            for bit, proj in ((0, p0), (1, p1)):
                out = proj @ s
                if linalg.norm(out) <= prune:
                    continue
                if bit == 1 and lower is not None:
                    out = lower @ out
                expanded.append((rec + ((leaf.q, bit),), out))
        branches = expanded
    return [OutcomeBranch(rec, s) for rec, s in branches]


# -- equivalence -------------------------------------------------------------


def default_dim(*programs: Program) -> int:
    return max((min_dim(p) for p in programs), default=0)


def uc_equiv_at(c1: UnitaryProgram, c2: UnitaryProgram, dim: int | None = None,
                tol: float = linalg.DEFAULT_TOL) -> bool:
    """Denotations agree entrywise within ``tol`` at register size ``dim``.

    ``dim`` defaults to one more than the largest qubit index either program
    uses.  Equality at one size does not, by itself, establish it at all sizes.
    """
    if dim is None:
        dim = default_dim(c1, c2)
    return linalg.approx_equal(denote_unitary(c1, dim), denote_unitary(c2, dim), tol)


def uc_equiv_up_to_phase(c1: UnitaryProgram, c2: UnitaryProgram, dim: int | None = None,
                         tol: float = linalg.DEFAULT_TOL) -> bool:
    if dim is None:
        dim = default_dim(c1, c2)
    return linalg.proportional(denote_unitary(c1, dim), denote_unitary(c2, dim), tol)
