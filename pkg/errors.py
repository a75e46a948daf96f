"""
Exception hierarchy shared by the library, the CLI and the HTTP surface.

Every error carries a human-readable ``detail``, the HTTP status the API
answers with and the process exit code the CLI returns.
"""
from typing import Optional


class StabilizerError(Exception):
    """Base class for every error raised by the toolkit."""

    status_code: int = 400
    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ParseError(StabilizerError):
    """Malformed .stab / .qc / .frame / Pauli text."""

    exit_code = 2

    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, column {column}"
            detail = f"{where}: {detail}"
        super().__init__(detail)


class DimensionError(StabilizerError, ValueError):
    """Qubit counts disagree, or a shape is impossible (e.g. n = 0)."""

    status_code = 422
    exit_code = 3


class QubitIndexError(DimensionError, IndexError):
    """A qubit or row index is outside ``0..n-1``."""


class InvariantError(StabilizerError):
    """Input violates a stabilizer invariant (non-commuting rows, dependent rows, ...)."""

    status_code = 422
    exit_code = 4


class UnsupportedOperationError(StabilizerError):
    """Operation is outside what the target supports (e.g. measuring a frame)."""


class CapacityError(StabilizerError):
    """Request is larger than a configured limit (dense oracle, enumeration)."""

    status_code = 413


def check_index(index: int, n: int, what: str = "qubit") -> int:
    if not 0 <= index < n:
        raise QubitIndexError(f"{what} index {index} out of range for n={n}")
    return index
