"""Dense complex linear algebra for the SQIR semantics.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Qubit 0 is the
leftmost (most significant) tensor factor, so basis index encoding is
big-endian in qubit order.
"""
from __future__ import annotations

import json
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9

DTYPE = np.complex128


class PlacementError(ValueError):
    """An operator does not fit inside the register at the requested offset."""


def identity(n: int) -> np.ndarray:
    """The ``n x n`` identity."""
    return np.eye(n, dtype=DTYPE)


def zeros(rows: int, cols: int | None = None) -> np.ndarray:
    return np.zeros((rows, rows if cols is None else cols), dtype=DTYPE)


def matrix(rows: Sequence[Sequence[complex]]) -> np.ndarray:
    m = np.array(rows, dtype=DTYPE)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def adjoint(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; entry ``(i1*rb + i2, j1*cb + j2)`` is ``a[i1,j1]*b[i2,j2]``."""
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Tensor product of a sequence of factors; the empty product is ``I_1``."""
    return reduce(np.kron, factors, identity(1))


def basis_ket(bits: Sequence[int]) -> np.ndarray:
    """Column vector ``|b0 b1 ... b(n-1)>`` with ``bits[0]`` the leftmost qubit."""
    index = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"basis bits must be 0 or 1, got {b!r}")
        index = 2 * index + int(b)
    ket = np.zeros((2 ** len(bits), 1), dtype=DTYPE)
    ket[index, 0] = 1.0
    return ket


def ket_bra(i: int, j: int) -> np.ndarray:
    """The single-qubit outer product ``|i><j|``."""
    m = zeros(2)
    m[i, j] = 1.0
    return m


def pad(op: np.ndarray, q: int, dim: int) -> np.ndarray:
    """Embed a ``2^k x 2^k`` operator acting on qubits ``q..q+k-1`` of a ``dim``-qubit register.

    Returns ``I_{2^q} (x) op (x) I_{2^(dim-q-k)}``.
    """
    rows, cols = op.shape
    if rows != cols or rows & (rows - 1):
        raise PlacementError(f"operator must be square with power-of-two size, got {op.shape}")
    k = rows.bit_length() - 1
    if q < 0 or q + k > dim:
        raise PlacementError(f"{k}-qubit operator at qubit {q} does not fit in {dim} qubits")
    return np.kron(np.kron(identity(2 ** q), op), identity(2 ** (dim - q - k)))


def norm(v: np.ndarray) -> float:
    """Euclidean norm, ``sqrt(Re(v^dagger v))``."""
    return float(np.sqrt(np.real(np.vdot(v, v))))


def trace(m: np.ndarray) -> complex:
    return complex(np.trace(m))


def approx_equal(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Same shape and max entrywise absolute difference at most ``tol``."""
    if a.shape != b.shape:
        return False
    if a.size == 0:
        return True
    return bool(np.max(np.abs(a - b)) <= tol)


def proportional(u: np.ndarray, v: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``u`` is a nonzero multiple of ``v`` (or both are zero).

    Every 2x2 cross determinant ``u_i v_j - u_j v_i`` must vanish within ``tol``.
    The zero vector is proportional only to the zero vector.
    """
    if u.shape != v.shape:
        return False
    u = u.reshape(-1)
    v = v.reshape(-1)
    u_zero = bool(np.all(np.abs(u) <= tol))
    v_zero = bool(np.all(np.abs(v) <= tol))
    if u_zero or v_zero:
        return u_zero and v_zero
    block = max(1, 2 ** 22 // u.size)
    for start in range(0, u.size, block):
        ui, vi = u[start:start + block, None], v[start:start + block, None]
        if np.max(np.abs(ui * v[None, :] - vi * u[None, :])) > tol:
            return False
    return True


def is_unitary(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return approx_equal(adjoint(m) @ m, identity(m.shape[0]), tol)


def num_qubits(m: np.ndarray) -> int:
    """Register size of a ``2^n``-row semantic object."""
    rows = m.shape[0]
    if rows < 1 or rows & (rows - 1):
        raise ValueError(f"dimension {rows} is not a power of two")
    return rows.bit_length() - 1


def to_jsonable(m: np.ndarray) -> dict:
    """``{"rows", "cols", "data": [[re, im], ...]}`` in row-major order."""
    m = np.asarray(m, dtype=DTYPE)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def from_jsonable(obj: dict) -> np.ndarray:
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if len(data) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
    flat = np.array([complex(re, im) for re, im in data], dtype=DTYPE)
    return flat.reshape(rows, cols)


def dumps(m: np.ndarray, **kwargs) -> str:
    # json writes floats with repr, i.e. shortest round-trip (up to 17 digits).
    return json.dumps(to_jsonable(m), **kwargs)


def loads(text: str) -> np.ndarray:
    return from_jsonable(json.loads(text))
