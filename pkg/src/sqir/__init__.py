"""Executable toolkit for SQIR, a small quantum intermediate representation.

Programs are built with :mod:`sqir.ir`, given meaning by :mod:`sqir.semantics`,
rewritten by :mod:`sqir.transforms`, and read/written by :mod:`sqir.frontend`.
"""
from .ir import (
    App,
    Gate,
    Meas,
    Reset,
    Seq,
    Skip,
    cnot,
    count_ops,
    cz_macro,
    flatten,
    h,
    in_par,
    map_qubits,
    r,
    seq,
    swap_macro,
    well_typed,
    x,
    y,
    z,
)
from .semantics import (
    OutcomeBranch,
    apply_unitary,
    denote_unitary,
    enumerate_outcomes,
    eval_density,
    uc_equiv_at,
    ueval,
)
from .transforms import map_to_lnn, not_propagation, respects_lnn, rm_uskips

__version__ = "0.1.0"
