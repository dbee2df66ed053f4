"""``sqir`` command-line driver.

Exit codes: 0 success / equivalent, 1 not equivalent (or failed
``--verify``), 2 usage error, 3 parse or type error.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Sequence

import numpy as np

from . import linalg
from .frontend import ParseError, SourceFile, export_qasm, import_qasm, load_source, parse_native, print_native
from .ir import h, is_unitary_program, iter_leaves_with_paths, seq, well_typed, x
from .programs import (
    OracleSyntaxError,
    cpar,
    dj_report,
    ghz_circuit,
    parse_oracle,
    superdense,
    teleport_program,
)
from .semantics import (
    IllTypedProgramError,
    apply_unitary,
    denote_unitary,
    enumerate_outcomes,
    eval_density,
    uc_equiv_at,
    uc_equiv_up_to_phase,
)
from .transforms import PassError, parse_pass_list, run_passes

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_USAGE = 2
EXIT_INVALID = 3


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CommandError(f"cannot read {path}: {e.strerror}", EXIT_USAGE) from None


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise CommandError(f"cannot write {out}: {e.strerror}", EXIT_USAGE) from None


def _load(path: str, loader=load_source) -> SourceFile:
    text = _read(path)
    try:
        return loader(text)
    except ParseError as e:
        col = f":{e.column}" if e.column is not None else ""
        raise CommandError(f"{path}:{e.line}{col}: error: {e.bare_message}", EXIT_INVALID) from None


def _diagnostic_lines(path: str, f: SourceFile, dim: int) -> list[str]:
    program = f.program
    index = {p: i for i, (p, _) in enumerate(iter_leaves_with_paths(program))}
    lines = []
    for d in well_typed(program, dim):
        line = f.line_of(index[d.location])
        where = f"{path}:{line}" if line is not None else path
        lines.append(f"{where}: error: {d.cause.value}: {d.message} (at {d.path})")
    return lines


def _require_unitary(path: str, f: SourceFile, what: str) -> None:
    if not is_unitary_program(f.program):
        raise CommandError(f"{path}: {what} requires a unitary program (no meas/reset)", EXIT_INVALID)


def _dim(args, f: SourceFile) -> int:
    dim = f.dim if args.dim is None else args.dim
    if dim < 0:
        raise CommandError("--dim must be non-negative", EXIT_USAGE)
    return dim


def _input_state(bits: str | None, dim: int) -> np.ndarray:
    if bits is None:
        bits = "0" * dim
    if len(bits) != dim or set(bits) - {"0", "1"}:
        raise CommandError(f"--input must be a {dim}-character bitstring", EXIT_USAGE)
    return linalg.basis_ket([int(b) for b in bits])


def _warn_ill_typed(path: str, f: SourceFile, dim: int) -> None:
    for line in _diagnostic_lines(path, f, dim):
        print(line.replace(": error:", ": warning:", 1) + " -- denotes the zero matrix", file=sys.stderr)


# -- commands ----------------------------------------------------------------


def cmd_check(args) -> int:
    f = _load(args.file)
    dim = _dim(args, f)
    lines = _diagnostic_lines(args.file, f, dim)
    for line in lines:
        print(line, file=sys.stderr)
    if lines:
        return EXIT_INVALID
    print(f"{args.file}: ok (well-typed at dim {dim})")
    return EXIT_OK


def cmd_denote(args) -> int:
    f = _load(args.file)
    _require_unitary(args.file, f, "denote")
    dim = _dim(args, f)
    _warn_ill_typed(args.file, f, dim)
    print(linalg.dumps(denote_unitary(f.program, dim)))
    return EXIT_OK


def cmd_run(args) -> int:
    f = _load(args.file)
    psi = _input_state(args.input, f.dim)
    _warn_ill_typed(args.file, f, f.dim)
    if args.density:
        rho = psi @ linalg.adjoint(psi)
        # diagnostics were already printed above
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = eval_density(f.program, f.dim, rho)
    else:
        if not is_unitary_program(f.program):
            raise CommandError(f"{args.file}: statevector run requires a unitary program; "
                               "use --density or 'sqir branches'", EXIT_INVALID)
        out = apply_unitary(f.program, f.dim, psi)
    print(linalg.dumps(out))
    return EXIT_OK


def cmd_branches(args) -> int:
    f = _load(args.file)
    psi = _input_state(args.input, f.dim)
    try:
        branches = enumerate_outcomes(f.program, f.dim, psi)
    except IllTypedProgramError:
        for line in _diagnostic_lines(args.file, f, f.dim):
            print(line, file=sys.stderr)
        return EXIT_INVALID
    print(json.dumps([b.to_jsonable() for b in branches]))
    return EXIT_OK


def _run_pipeline(args, names: list[str]) -> int:
    f = _load(args.file)
    _require_unitary(args.file, f, "optimization")
    out, reports = run_passes(f.program, names, verify=args.verify, dim=f.dim, tol=args.tol)
    print(json.dumps([r.to_jsonable() for r in reports]), file=sys.stderr)
    failed = [r.name for r in reports if r.verified is False]
    if failed:
        print(f"{args.file}: verification failed after pass(es) {', '.join(failed)}", file=sys.stderr)
        return EXIT_DIFFERENT
    _write(print_native(SourceFile.from_program(out, f.dim)), args.output)
    return EXIT_OK


def cmd_opt(args) -> int:
    try:
        names = parse_pass_list(args.passes)
    except PassError as e:
        raise CommandError(str(e), EXIT_USAGE) from None
    return _run_pipeline(args, names)


def cmd_map(args) -> int:
    return _run_pipeline(args, ["lnn"])


def cmd_equiv(args) -> int:
    f1, f2 = _load(args.file1), _load(args.file2)
    _require_unitary(args.file1, f1, "equiv")
    _require_unitary(args.file2, f2, "equiv")
    dim = max(f1.dim, f2.dim) if args.dim is None else args.dim
    check = uc_equiv_up_to_phase if args.proportional else uc_equiv_at
    if check(f1.program, f2.program, dim, args.tol):
        print("equivalent")
        return EXIT_OK
    print("not equivalent")
    return EXIT_DIFFERENT


def cmd_qasm(args) -> int:
    if args.direction == "import":
        f = _load(args.input_file, import_qasm)
        _write(print_native(f), args.output)
    else:
        f = _load(args.input_file, parse_native)
        _write(export_qasm(f), args.output)
    return EXIT_OK


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError(f"expected 0 or 1, got {text!r}")
    return int(text)


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = -1
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return n


def cmd_demo(args) -> int:
    if args.name == "ghz":
        sys.stdout.write(print_native(ghz_circuit(args.n), args.n))
    elif args.name == "superdense":
        sys.stdout.write(print_native(superdense(args.b1, args.b2), 2))
    elif args.name == "teleport":
        sys.stdout.write(print_native(teleport_program(), 3))
    else:
        try:
            tree = parse_oracle(args.oracle)
        except OracleSyntaxError as e:
            raise CommandError(f"bad oracle: {e}", EXIT_USAGE) from None
        n = 1 + tree.depth
        prep = print_native(seq(x(0), cpar(n, h)), n)
        layer = print_native(cpar(n, h), n).split("\n", 2)[2]
        sys.stdout.write(prep + f"# oracle {tree} (matrix level, not expressible as gates)\n" + layer)
        print(json.dumps(dj_report(tree, args.tol).to_jsonable()), file=sys.stderr)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="comparison tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="PRNG seed for randomized checks")

    parser = argparse.ArgumentParser(prog="sqir", description=__doc__.splitlines()[0])
    parser.add_argument("--tol", type=float, default=linalg.DEFAULT_TOL)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="type-check a program")
    p.add_argument("file")
    p.add_argument("--dim", type=_natural)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("denote", parents=[common], help="print the unitary denotation as JSON")
    p.add_argument("file")
    p.add_argument("--dim", type=_natural)
    p.set_defaults(func=cmd_denote)

    p = sub.add_parser("run", parents=[common], help="evaluate on a basis input")
    p.add_argument("file")
    p.add_argument("--input", metavar="BITSTRING")
    p.add_argument("--density", action="store_true", help="use density-matrix semantics")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("branches", parents=[common], help="enumerate measurement branches")
    p.add_argument("file")
    p.add_argument("--input", metavar="BITSTRING")
    p.set_defaults(func=cmd_branches)

    p = sub.add_parser("opt", parents=[common], help="run optimization passes")
    p.add_argument("file")
    p.add_argument("--passes", required=True, help="comma list of rm-skip, not-prop, lnn")
    p.add_argument("-o", "--output")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("map", parents=[common], help="map onto an architecture")
    p.add_argument("file")
    p.add_argument("--arch", required=True, choices=["lnn"])
    p.add_argument("-o", "--output")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("equiv", parents=[common], help="check semantic equivalence")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--dim", type=_natural)
    p.add_argument("--proportional", action="store_true", help="compare up to a global scalar")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("qasm", parents=[common], help="convert to or from OpenQASM 2.0")
    p.add_argument("direction", choices=["import", "export"])
    p.add_argument("input_file", metavar="IN")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_qasm)

    p = sub.add_parser("demo", parents=[common], help="emit an example program")
    demos = p.add_subparsers(dest="name", required=True)
    d = demos.add_parser("ghz", parents=[common])
    d.add_argument("n", type=_natural)
    d = demos.add_parser("superdense", parents=[common])
    d.add_argument("b1", type=_bit)
    d.add_argument("b2", type=_bit)
    demos.add_parser("teleport", parents=[common])
    d = demos.add_parser("dj", parents=[common])
    d.add_argument("oracle")
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol <= 0:
        parser.error("--tol must be positive")
    try:
        return args.func(args)
    except CommandError as e:
        print(e if e.code == EXIT_INVALID else f"sqir: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
