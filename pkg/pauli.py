"""
Pauli strings: phase-tracked products of I/X/Y/Z literals.

A literal is stored as two bits (x, z): 00=I, 01=Z, 10=X, 11=Y. A string
carries a phase exponent in Z/4 so the operator is ``i**phase_exp`` times the
tensor product of its literals. Qubit 0 is the leftmost literal.

The column kernels at the bottom conjugate whole bit planes (one row per
generator) by a stabilizer gate and are shared with the tableau.
"""
import re
from typing import Tuple

import numpy as np

from errors import DimensionError, ParseError, UnsupportedOperationError, check_index
from gates import GateApplication, GateKind, cnot, h

LITERALS = "IZXY"
_CODES = {ch: i for i, ch in enumerate(LITERALS)}
_PHASE_PREFIX = {0: "+", 1: "i", 2: "-", 3: "-i"}
_PAULI_TEXT = re.compile(r"^\s*(\+i|-i|\+|-|i)?([IXYZ]+)\s*$")


def _literal_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent of i picked up by the single-qubit product (x1,z1)·(x2,z2)."""
    if not x1 and not z1:
        return 0
    if x1 and z1:
        return z2 - x2
    if x1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


# index (code_a << 2) | code_b, code = (x << 1) | z
PRODUCT_PHASE = np.array(
    [
        _literal_phase(a >> 1, a & 1, b >> 1, b & 1) % 4
        for a in range(4)
        for b in range(4)
    ],
    dtype=np.int64,
)


def codes_of(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    return (x.astype(np.int64) << 1) | z.astype(np.int64)


def literal_product_phase(ax: np.ndarray, az: np.ndarray, bx: np.ndarray, bz: np.ndarray) -> int:
    """Phase exponent of the literal-only product a·b (signs excluded)."""
    return int(PRODUCT_PHASE[(codes_of(ax, az) << 2) | codes_of(bx, bz)].sum() % 4)


class PauliString:
    __slots__ = ("x", "z", "phase_exp")

    def __init__(self, x, z, phase_exp: int = 0):
        self.x = np.array(x, dtype=bool).reshape(-1)
        self.z = np.array(z, dtype=bool).reshape(-1)
        if self.x.shape != self.z.shape:
            raise DimensionError(f"x/z planes differ in length: {self.x.size} vs {self.z.size}")
        if self.x.size == 0:
            raise DimensionError("Pauli string needs at least one qubit")
        self.phase_exp = int(phase_exp) % 4

    @classmethod
    def from_literals(cls, literals: str, phase_exp: int = 0) -> "PauliString":
        try:
            codes = np.array([_CODES[ch] for ch in literals], dtype=np.int64)
        except KeyError as e:
            raise ParseError(f"unknown Pauli literal {e.args[0]!r}") from None
        return cls(codes >> 1 & 1, codes & 1, phase_exp)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(np.zeros(n, dtype=bool), np.zeros(n, dtype=bool))

    @classmethod
    def single(cls, n: int, q: int, literal: str, phase_exp: int = 0) -> "PauliString":
        check_index(q, n)
        s = cls.identity(n)
        code = _CODES[literal]
        s.x[q] = bool(code >> 1)
        s.z[q] = bool(code & 1)
        s.phase_exp = phase_exp % 4
        return s

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def literals(self) -> str:
        return "".join(LITERALS[c] for c in codes_of(self.x, self.z))

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def copy(self) -> "PauliString":
        return PauliString(self.x, self.z, self.phase_exp)

    def operator_form(self) -> Tuple[int, np.ndarray, np.ndarray]:
        """Return ``(t, v, u)`` with this string equal to ``i**t X(v) Z(u)``."""
        ys = int(np.count_nonzero(self.x & self.z))
        return (self.phase_exp + ys) % 4, self.x.copy(), self.z.copy()

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.x, self.z, self.phase_exp + 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.phase_exp == other.phase_exp
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.phase_exp, self.x.tobytes(), self.z.tobytes()))

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliString({format_pauli(self)!r})"


def _require_same_width(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise DimensionError(f"Pauli strings act on {a.n} and {b.n} qubits")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    _require_same_width(a, b)
    phase = a.phase_exp + b.phase_exp + literal_product_phase(a.x, a.z, b.x, b.z)
    return PauliString(a.x ^ b.x, a.z ^ b.z, phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    _require_same_width(a, b)
    return int(np.count_nonzero((a.x & b.z) ^ (a.z & b.x))) % 2 == 0


def conjugate_gate(p: PauliString, g: GateApplication) -> PauliString:
    """Return ``U p U†`` for the stabilizer gate ``U``."""
    g.check(p.n)
    x = p.x.reshape(1, -1).copy()
    z = p.z.reshape(1, -1).copy()
    phase = np.array([p.phase_exp], dtype=np.int64)
    conjugate_columns(x, z, phase, g)
    return PauliString(x[0], z[0], phase[0])


def format_pauli(p: PauliString) -> str:
    return _PHASE_PREFIX[p.phase_exp] + p.literals


def parse_pauli(text: str) -> PauliString:
    match = _PAULI_TEXT.match(text)
    if not match:
        raise ParseError(f"not a Pauli string: {text!r}")
    prefix, literals = match.groups()
    phase = {None: 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}[prefix]
    return PauliString.from_literals(literals, phase)


# --- column kernels -------------------------------------------------------
# x, z: (rows, n) bool planes; phase: (rows,) int exponents. Updated in place.

def _conjugate_h(x, z, phase, q):
    xq = x[:, q].copy()
    zq = z[:, q].copy()
    phase += 2 * (xq & zq)
    x[:, q] = zq
    z[:, q] = xq


def _conjugate_p(x, z, phase, q):
    phase += 2 * (x[:, q] & z[:, q])
    z[:, q] ^= x[:, q]


def _conjugate_cnot(x, z, phase, c, t):
    phase += 2 * (x[:, c] & z[:, t] & ~(x[:, t] ^ z[:, c]))
    x[:, t] ^= x[:, c]
    z[:, c] ^= z[:, t]


def _build_cz_table() -> np.ndarray:
    """CZ(c,t) = H(t)·CNOT(c,t)·H(t), tabulated per (code_c, code_t)."""
    table = np.zeros((16, 3), dtype=np.int64)
    for code_c in range(4):
        for code_t in range(4):
            x = np.array([[code_c >> 1, code_t >> 1]], dtype=bool)
            z = np.array([[code_c & 1, code_t & 1]], dtype=bool)
            phase = np.zeros(1, dtype=np.int64)
            for g in (h(1), cnot(0, 1), h(1)):
                conjugate_columns(x, z, phase, g)
            codes = codes_of(x[0], z[0])
            table[(code_c << 2) | code_t] = (codes[0], codes[1], phase[0] % 4)
    return table


def _conjugate_cz(x, z, phase, c, t):
    entry = CZ_TABLE[(codes_of(x[:, c], z[:, c]) << 2) | codes_of(x[:, t], z[:, t])]
    x[:, c] = entry[:, 0] >> 1 & 1
    z[:, c] = entry[:, 0] & 1
    x[:, t] = entry[:, 1] >> 1 & 1
    z[:, t] = entry[:, 1] & 1
    phase += entry[:, 2]


def conjugate_columns(x: np.ndarray, z: np.ndarray, phase: np.ndarray, g: GateApplication) -> int:
    """Conjugate every row by ``g`` in place; returns the number of literal writes."""
    rows = x.shape[0]
    if g.kind is GateKind.H:
        _conjugate_h(x, z, phase, g.qubits[0])
    elif g.kind is GateKind.P:
        _conjugate_p(x, z, phase, g.qubits[0])
    elif g.kind is GateKind.CNOT:
        _conjugate_cnot(x, z, phase, *g.qubits)
    elif g.kind is GateKind.CZ:
        _conjugate_cz(x, z, phase, *g.qubits)
    else:
        raise UnsupportedOperationError(f"cannot conjugate by non-unitary gate {g}")
    phase %= 4
    return rows * len(g.qubits)


CZ_TABLE = _build_cz_table()
