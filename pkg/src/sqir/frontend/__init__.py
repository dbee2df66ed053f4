"""Text formats: the native SQIR format and an OpenQASM 2.0 subset."""
from .native import ParseError, SourceFile, parse_native, print_native
from .qasm import export_qasm, import_qasm


def load_source(text: str) -> SourceFile:
    """Parse native or QASM text, picking the format from the first line."""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith(("#", "//")):
            continue
        if stripped.startswith("OPENQASM"):
            return import_qasm(text)
        break
    return parse_native(text)


__all__ = [
    "ParseError",
    "SourceFile",
    "export_qasm",
    "import_qasm",
    "load_source",
    "parse_native",
    "print_native",
]
