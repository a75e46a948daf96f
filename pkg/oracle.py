"""
Dense state-vector reference engine.

Only meant for small n (``STABKIT_ORACLE_MAX_QUBITS``, default 6). Qubit 0 is
the most significant bit of the basis index and the first Kronecker factor.
"""
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Optional

import numpy as np

from config import get_settings
from errors import CapacityError, DimensionError, InvariantError
from gates import GateApplication, GateKind, MeasurementRecord
from pauli import PauliString
from tableau import RngLike, StabilizerMatrix

logger = logging.getLogger(__name__)

ATOL = 1e-12

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_LITERAL_MATRICES = {"I": _I, "X": _X, "Y": _Y, "Z": _Z}

GATE_MATRICES = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    GateKind.P: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
}


def check_oracle_size(n: int) -> None:
    limit = get_settings().oracle_max_qubits
    if n > limit:
        raise CapacityError(f"dense oracle limited to n <= {limit}, got n={n}")


@dataclass
class DenseState:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 2 ** self.n:
            raise DimensionError(f"expected {2 ** self.n} amplitudes for n={self.n}")

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "DenseState":
        check_oracle_size(n)
        amplitudes = np.zeros(2 ** n, dtype=complex)
        amplitudes[index] = 1.0
        return cls(n, amplitudes)

    @classmethod
    def zero(cls, n: int) -> "DenseState":
        return cls.basis(n, 0)

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def phase_fixed(self) -> "DenseState":
        """Copy whose smallest-index nonzero amplitude is real positive."""
        nonzero = np.flatnonzero(np.abs(self.amplitudes) > ATOL)
        if nonzero.size == 0:
            return self.copy()
        lead = self.amplitudes[nonzero[0]]
        return DenseState(self.n, self.amplitudes * (abs(lead) / lead))


def index_of(bits) -> int:
    """Basis index of a bit vector, qubit 0 most significant."""
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


def pauli_matrix(p: PauliString) -> np.ndarray:
    check_oracle_size(p.n)
    dense = reduce(np.kron, (_LITERAL_MATRICES[ch] for ch in p.literals))
    return (1j ** p.phase_exp) * dense


def gate_unitary(g: GateApplication, n: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of a unitary gate."""
    check_oracle_size(n)
    columns = []
    for index in range(2 ** n):
        state = DenseState.basis(n, index)
        _apply_unitary(state, g)
        columns.append(state.amplitudes)
    return np.stack(columns, axis=1)


def matrix_to_state(m: StabilizerMatrix) -> DenseState:
    """Project basis vectors onto the stabilized subspace until one survives."""
    n = m.n
    check_oracle_size(n)
    dim = 2 ** n
    projector = np.eye(dim, dtype=complex)
    for row in m.rows():
        projector = projector @ ((np.eye(dim) + pauli_matrix(row)) / 2)

    for index in range(dim):
        column = projector[:, index]
        norm = np.linalg.norm(column)
        if norm > 1e-9:
            return DenseState(n, column / norm).phase_fixed()
    raise InvariantError("projector annihilates every basis vector; matrix is inconsistent")


def _apply_unitary(s: DenseState, g: GateApplication) -> None:
    qubits = list(g.qubits)
    k = len(qubits)
    tensor = s.amplitudes.reshape([2] * s.n)
    tensor = np.moveaxis(tensor, qubits, list(range(k)))
    shape = tensor.shape
    updated = GATE_MATRICES[g.kind] @ tensor.reshape(2 ** k, -1)
    tensor = np.moveaxis(updated.reshape(shape), list(range(k)), qubits)
    s.amplitudes = np.ascontiguousarray(tensor).reshape(-1)


def dense_apply(s: DenseState, g: GateApplication, rng: RngLike = None) -> Optional[MeasurementRecord]:
    """
    Apply one gate in place.

    Unitary gates leave the global phase wherever the matrix action puts it;
    call ``phase_fixed`` before comparing against ``matrix_to_state``.
    """
    g.check(s.n)
    if g.kind is not GateKind.MEASURE:
        _apply_unitary(s, g)
        return None

    q = g.qubits[0]
    tensor = s.amplitudes.reshape([2] * s.n)
    one = np.take(tensor, 1, axis=q)
    p_one = float(np.sum(np.abs(one) ** 2))
    p_one = min(max(p_one, 0.0), 1.0)
    rng = np.random.default_rng(rng)
    bit = int(rng.random() < p_one)
    keep = p_one if bit else 1.0 - p_one

    mask_shape = [1] * s.n
    mask_shape[q] = 2
    mask = np.zeros(2).reshape(mask_shape)
    mask.flat[bit] = 1.0
    collapsed = (tensor * mask).reshape(-1) / np.sqrt(keep)
    s.amplitudes = collapsed
    deterministic = p_one < ATOL or p_one > 1 - ATOL
    return MeasurementRecord(q, bit, deterministic)


def apply_dense_circuit(s: DenseState, circuit, rng: RngLike = None) -> list:
    rng = np.random.default_rng(rng)
    return [r for r in (dense_apply(s, g, rng) for g in circuit) if r is not None]


def dense_inner_product(a: DenseState, b: DenseState) -> complex:
    if a.n != b.n:
        raise DimensionError(f"states have n={a.n} and n={b.n}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: DenseState, b: DenseState) -> float:
    """|<a|b>|, insensitive to global phase."""
    return abs(dense_inner_product(a, b))
