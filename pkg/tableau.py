"""
Stabilizer matrices: row operations, gate conjugation, canonical form and
computational-basis measurement.

Rows are kept as two boolean bit planes plus a phase vector (exponents of i,
always 0 or 2 for a valid matrix). Row handles go through a permutation
array so swapping two rows never moves literal data.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Literal, Sequence, Union

import numpy as np

from errors import (
    DimensionError,
    InvariantError,
    ParseError,
    UnsupportedOperationError,
    check_index,
)
from gates import GateApplication, GateKind
from pauli import (
    PRODUCT_PHASE,
    PauliString,
    codes_of,
    conjugate_columns,
    format_pauli,
    parse_pauli,
)

logger = logging.getLogger(__name__)

RngLike = Union[np.random.Generator, int, None]


@dataclass(frozen=True)
class RowOp:
    """One step of a reduction log.

    ``swap`` exchanges rows i and j. ``mult`` replaces row i by row_i·row_j;
    ``phase`` is the exponent contributed by the literals alone, so replaying
    the log on any sign assignment is ``s_i <- s_i + s_j + phase``.
    """

    kind: Literal["swap", "mult"]
    i: int
    j: int
    phase: int = 0


@dataclass(frozen=True)
class MeasurementOutcome:
    bit: int
    deterministic: bool


def gf2_rank(bits: np.ndarray) -> int:
    a = np.array(bits, dtype=bool)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivots = np.flatnonzero(a[rank:, col])
        if pivots.size == 0:
            continue
        pivot = rank + pivots[0]
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        mask = a[:, col].copy()
        mask[rank] = False
        a[mask] ^= a[rank]
        rank += 1
    return rank


class StabilizerMatrix:
    def __init__(self, x, z, phase=None, *, validate: bool = True):
        x = np.array(x, dtype=bool)
        z = np.array(z, dtype=bool)
        if x.ndim != 2 or x.shape != z.shape or x.shape[0] != x.shape[1]:
            raise DimensionError(f"stabilizer matrix needs n x n planes, got {x.shape} and {z.shape}")
        n = x.shape[0]
        if n == 0:
            raise DimensionError("stabilizer matrix needs n >= 1")
        if phase is None:
            phase = np.zeros(n, dtype=np.int64)
        phase = np.array(phase, dtype=np.int64).reshape(-1) % 4
        if phase.size != n:
            raise DimensionError(f"expected {n} row phases, got {phase.size}")

        self._x = x
        self._z = z
        self._phase = phase
        self._order = np.arange(n)
        self.literal_writes = 0
        if validate:
            self.validate()

    # construction -----------------------------------------------------------

    @classmethod
    def zero_state(cls, n: int) -> "StabilizerMatrix":
        """|0...0>, generated by Z on each qubit."""
        if n < 1:
            raise DimensionError("stabilizer matrix needs n >= 1")
        return cls(np.zeros((n, n), dtype=bool), np.eye(n, dtype=bool), validate=False)

    @classmethod
    def from_rows(cls, rows: Sequence[PauliString], *, validate: bool = True) -> "StabilizerMatrix":
        if not rows:
            raise DimensionError("stabilizer matrix needs n >= 1")
        widths = {r.n for r in rows}
        if len(widths) != 1 or widths.pop() != len(rows):
            raise DimensionError(f"need {len(rows)} rows of {len(rows)} literals")
        return cls(
            np.stack([r.x for r in rows]),
            np.stack([r.z for r in rows]),
            np.array([r.phase_exp for r in rows]),
            validate=validate,
        )

    @classmethod
    def from_strings(cls, rows: Iterable[str], *, validate: bool = True) -> "StabilizerMatrix":
        return cls.from_rows([parse_pauli(r) for r in rows], validate=validate)

    def copy(self) -> "StabilizerMatrix":
        clone = StabilizerMatrix(self.x, self.z, self.phase, validate=False)
        return clone

    def unsigned(self) -> "StabilizerMatrix":
        """Copy with every row sign set to '+'."""
        clone = self.copy()
        clone.clear_signs()
        return clone

    def clear_signs(self) -> None:
        self._phase[:] = 0

    # accessors ----------------------------------------------------------------

    @property
    def n(self) -> int:
        return self._x.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self._x[self._order]

    @property
    def z(self) -> np.ndarray:
        return self._z[self._order]

    @property
    def phase(self) -> np.ndarray:
        return self._phase[self._order]

    @property
    def sign_bits(self) -> np.ndarray:
        """1 where the row sign is '-'."""
        return (self.phase // 2).astype(np.uint8)

    def row(self, i: int) -> PauliString:
        r = self._order[check_index(i, self.n, "row")]
        return PauliString(self._x[r], self._z[r], self._phase[r])

    def rows(self) -> List[PauliString]:
        return [self.row(i) for i in range(self.n)]

    def set_row(self, i: int, p: PauliString) -> None:
        if p.n != self.n:
            raise DimensionError(f"row has {p.n} literals, matrix has n={self.n}")
        r = self._order[check_index(i, self.n, "row")]
        self._x[r] = p.x
        self._z[r] = p.z
        self._phase[r] = p.phase_exp
        self.literal_writes += self.n

    def literal(self, i: int, j: int) -> str:
        r = self._order[i]
        return "IZXY"[(int(self._x[r, j]) << 1) | int(self._z[r, j])]

    def validate(self) -> None:
        odd = np.flatnonzero(self._phase % 2)
        if odd.size:
            raise InvariantError(f"row {int(np.flatnonzero(self.phase % 2)[0])} has an imaginary phase")
        x = self.x.astype(np.int64)
        z = self.z.astype(np.int64)
        symplectic = (x @ z.T + z @ x.T) % 2
        clashes = np.argwhere(np.triu(symplectic, 1))
        if clashes.size:
            i, j = clashes[0]
            raise InvariantError(f"rows {i} and {j} anticommute")
        if gf2_rank(np.hstack([self.x, self.z])) != self.n:
            raise InvariantError("rows are not independent")

    def is_basis_form(self) -> bool:
        if self.x.any():
            return False
        z = self.z
        return bool((z.sum(axis=1) == 1).all() and (z.sum(axis=0) == 1).all())

    def basis_bits(self) -> List[int]:
        """Bits of the basis state, indexed by qubit. Requires basis form."""
        if not self.is_basis_form():
            raise InvariantError("matrix is not in basis form")
        bits = [0] * self.n
        for i, q in enumerate(np.argmax(self.z, axis=1)):
            bits[int(q)] = int(self.phase[i] // 2)
        return bits

    def canonical_key(self) -> str:
        reduced = self.copy()
        reduced.canonicalize()
        return format_stab(reduced)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilizerMatrix):
            return NotImplemented
        return (
            np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.phase, other.phase)
        )

    __hash__ = None

    def __str__(self) -> str:
        return format_stab(self)

    def __repr__(self) -> str:
        return f"StabilizerMatrix({[format_pauli(r) for r in self.rows()]!r})"

    # row operations ---------------------------------------------------------

    def row_swap(self, i: int, j: int) -> None:
        check_index(i, self.n, "row")
        check_index(j, self.n, "row")
        self._order[[i, j]] = self._order[[j, i]]

    def row_mult(self, i: int, j: int) -> int:
        """Replace row i by row_i·row_j; returns the literal phase exponent."""
        check_index(i, self.n, "row")
        check_index(j, self.n, "row")
        if i == j:
            raise InvariantError(f"row_mult({i}, {j}) would square a row to the identity")
        return int(self.mult_rows(np.array([i]), j)[0])

    def mult_rows(self, targets: np.ndarray, j: int) -> np.ndarray:
        pivot = self._order[j]
        rows = self._order[targets]
        lit = (
            PRODUCT_PHASE[
                (codes_of(self._x[rows], self._z[rows]) << 2)
                | codes_of(self._x[pivot], self._z[pivot])
            ].sum(axis=1)
            % 4
        )
        self._phase[rows] = (self._phase[rows] + self._phase[pivot] + lit) % 4
        self._x[rows] ^= self._x[pivot]
        self._z[rows] ^= self._z[pivot]
        self.literal_writes += rows.size * self.n
        return lit

    def apply_gate(self, g: GateApplication) -> None:
        g.check(self.n)
        if g.kind is GateKind.MEASURE:
            raise UnsupportedOperationError("apply_gate takes unitary gates; use measure()")
        self.literal_writes += conjugate_columns(self._x, self._z, self._phase, g)

    # reductions -------------------------------------------------------------

    def _eliminate(self, log: List[RowOp], column_mask: np.ndarray, i: int) -> None:
        mask = column_mask.copy()
        mask[i] = False
        targets = np.flatnonzero(mask)
        if targets.size == 0:
            return
        lits = self.mult_rows(targets, i)
        log.extend(RowOp("mult", int(t), i, int(l)) for t, l in zip(targets, lits))

    def canonicalize(self) -> List[RowOp]:
        """
        Reduce to canonical row-echelon form in place.

        Rows with X/Y literals come first with strictly increasing leading
        columns, and every X/Y pivot column is cleared of X/Y in all other
        rows. Pure-Z rows follow, reduced the same way on Z literals. The
        smallest eligible row index always wins a pivot.

        Pivot columns hold at most two non-I literal kinds (the X/Y pivot
        with Z, or the Z pivot with X). Other columns can hold all three.

        Returns:
            The row operations applied, in order.
        """
        n = self.n
        log: List[RowOp] = []
        i = 0
        for j in range(n):
            if i == n:
                break
            candidates = np.flatnonzero(self._x[self._order[i:], j])
            if candidates.size == 0:
                continue
            k = i + int(candidates[0])
            if k != i:
                self.row_swap(i, k)
                log.append(RowOp("swap", i, k))
            self._eliminate(log, self._x[self._order, j], i)
            i += 1

        for j in range(n):
            if i == n:
                break
            rest = self._order[i:]
            candidates = np.flatnonzero(self._z[rest, j] & ~self._x[rest, j])
            if candidates.size == 0:
                continue
            k = i + int(candidates[0])
            if k != i:
                self.row_swap(i, k)
                log.append(RowOp("swap", i, k))
            self._eliminate(log, self._z[self._order, j], i)
            i += 1
        return log

    def measure(self, q: int, rng: RngLike = None) -> MeasurementOutcome:
        """Measure qubit q in the computational basis, collapsing the state."""
        check_index(q, self.n)
        anticommuting = np.flatnonzero(self._x[self._order, q])
        if anticommuting.size:
            rng = np.random.default_rng(rng)
            p = int(anticommuting[0])
            if anticommuting.size > 1:
                self.mult_rows(anticommuting[1:], p)
            bit = int(rng.integers(2))
            self.set_row(p, PauliString.single(self.n, q, "Z", 2 * bit))
            return MeasurementOutcome(bit, False)

        self.canonicalize()
        for i in range(self.n):
            r = self._order[i]
            if not self._x[r].any() and self._z[r, q] and np.count_nonzero(self._z[r]) == 1:
                return MeasurementOutcome(int(self._phase[r] // 2), True)
        raise InvariantError(f"no Z_{q} row after reduction; matrix is not a valid stabilizer state")


# module-level operation names --------------------------------------------------

def row_swap(m: StabilizerMatrix, i: int, j: int) -> None:
    m.row_swap(i, j)


def row_mult(m: StabilizerMatrix, i: int, j: int) -> int:
    return m.row_mult(i, j)


def apply_gate(m: StabilizerMatrix, g: GateApplication) -> None:
    m.apply_gate(g)


def canonicalize(m: StabilizerMatrix) -> List[RowOp]:
    return m.canonicalize()


def measure(m: StabilizerMatrix, q: int, rng: RngLike = None) -> MeasurementOutcome:
    return m.measure(q, rng)


def replay_signs(log: Sequence[RowOp], bits: np.ndarray) -> np.ndarray:
    """
    Apply a reduction log to sign bits (1 = '-').

    ``bits`` may be one vector of length n or a (k, n) stack; the literal
    phase of each multiplication is shared across the stack.
    """
    out = np.array(bits, dtype=np.uint8)
    view = out.reshape(-1, out.shape[-1])
    for op in log:
        if op.kind == "swap":
            view[:, [op.i, op.j]] = view[:, [op.j, op.i]]
        else:
            view[:, op.i] ^= view[:, op.j] ^ np.uint8(op.phase // 2)
    return out


class BasisSupport:
    """
    Basis amplitudes of every state sharing one literal layout.

    The layout is reduced once; signs are supplied per call (in the row order
    of the matrix passed in) and carried through the same reduction. The
    support of a stabilizer state is an affine subspace: Z rows fix the
    offset, X/Y rows span the directions. Amplitudes are reported under the
    convention that the smallest basis index in the support is real positive.
    """

    def __init__(self, m: StabilizerMatrix):
        reduced = m.unsigned()
        self.log = reduced.canonicalize()
        self.n = m.n
        self.x = reduced.x
        self.z = reduced.z
        has_x = self.x.any(axis=1)
        self.x_rank = int(np.count_nonzero(has_x))
        self.x_pivots = [int(np.argmax(self.x[r])) for r in range(self.x_rank)]
        self.z_pivots = [int(np.argmax(self.z[r])) for r in range(self.x_rank, self.n)]
        self.magnitude = 2.0 ** (-self.x_rank / 2)

    def canonical_signs(self, bits: np.ndarray) -> np.ndarray:
        return replay_signs(self.log, bits)

    def min_support(self, canonical_signs: np.ndarray) -> np.ndarray:
        """Lexicographically smallest basis state (qubit 0 most significant) in the support."""
        b = np.zeros(self.n, dtype=bool)
        for offset, col in enumerate(self.z_pivots):
            b[col] = bool(canonical_signs[self.x_rank + offset])
        for r, col in enumerate(self.x_pivots):
            if b[col]:
                b ^= self.x[r]
        return b

    def amplitude(self, canonical_signs: np.ndarray, b: np.ndarray) -> complex:
        base = self.min_support(canonical_signs)
        residual = np.array(b, dtype=bool) ^ base
        product = PauliString.identity(self.n)
        for r, col in enumerate(self.x_pivots):
            if residual[col]:
                residual ^= self.x[r]
                product = product * PauliString(self.x[r], self.z[r], 2 * int(canonical_signs[r]))
        if residual.any():
            return 0j
        t, _, u = product.operator_form()
        sign = -1 if np.count_nonzero(u & base) % 2 else 1
        return (1j ** t) * sign * self.magnitude


# .stab text format ------------------------------------------------------------

def format_stab(m: StabilizerMatrix) -> str:
    lines = [str(m.n)]
    for row in m.rows():
        lines.append(("-" if row.phase_exp == 2 else "+") + row.literals)
    return "\n".join(lines) + "\n"


def parse_stab(text: str, *, validate: bool = True) -> StabilizerMatrix:
    numbered = [(no, line.rstrip()) for no, line in enumerate(text.splitlines(), start=1)]
    numbered = [(no, line) for no, line in numbered if line.strip()]
    if not numbered:
        raise ParseError("empty input; expected qubit count", 1, 1)
    head_no, head = numbered[0]
    if not head.strip().isdigit():
        raise ParseError(f"expected qubit count, got {head.strip()!r}", head_no, 1)
    n = int(head)
    if n < 1:
        raise DimensionError("stabilizer matrix needs n >= 1")
    body = numbered[1:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (body[-1][0] + 1 if body else head_no + 1)
        raise ParseError(f"expected {n} generator rows, got {len(body)}", where, 1)

    rows = []
    for no, line in body:
        line = line.strip()
        sign = line[0]
        if sign not in "+-":
            raise ParseError(f"row must start with '+' or '-', got {sign!r}", no, 1)
        literals = line[1:]
        for col, ch in enumerate(literals, start=2):
            if ch not in "IXYZ":
                raise ParseError(f"unknown literal {ch!r}", no, col)
        if len(literals) != n:
            raise ParseError(f"expected {n} literals, got {len(literals)}", no, len(literals) + 2)
        rows.append(PauliString.from_literals(literals, 2 if sign == "-" else 0))
    return StabilizerMatrix.from_rows(rows, validate=validate)


def read_stab(path: Union[str, Path]) -> StabilizerMatrix:
    m = parse_stab(Path(path).read_text())
    logger.debug(f"[STAB] read n={m.n} from {path}")
    return m


def write_stab(path: Union[str, Path], m: StabilizerMatrix) -> None:
    Path(path).write_text(format_stab(m))
