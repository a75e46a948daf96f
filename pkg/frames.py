"""
Stabilizer frames: an arbitrary state as a weighted sum of stabilizer states
that share one set of generator literals and differ only in their signs.

The frame's matrix is kept unsigned; member i is the matrix with sign vector
sigma_i installed. Every member is read under the global-phase convention of
the dense oracle (smallest basis index in the support is real positive), so
frame amplitudes absorb whatever phase a gate introduces.
"""
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from errors import DimensionError, InvariantError, ParseError, UnsupportedOperationError
from gates import Circuit, GateApplication, GateKind
from oracle import DenseState, check_oracle_size, matrix_to_state
from pauli import PauliString
from synth import basis_norm_circuit
from tableau import BasisSupport, StabilizerMatrix, replay_signs

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10


class StabilizerFrame:
    def __init__(self, matrix: StabilizerMatrix, phase_vectors, amplitudes):
        self.matrix = matrix.unsigned()
        vectors = np.array(phase_vectors, dtype=np.int64)
        if vectors.ndim == 1:
            vectors = vectors.reshape(1, -1)
        if vectors.shape[1] != matrix.n:
            raise DimensionError(f"phase vectors need {matrix.n} entries, got {vectors.shape[1]}")
        if not np.isin(vectors, (-1, 1)).all():
            raise InvariantError("phase vector entries must be +1 or -1")
        k = vectors.shape[0]
        if k < 1 or k > 2 ** matrix.n:
            raise InvariantError(f"frame size k={k} outside 1..2^{matrix.n}")
        if len({row.tobytes() for row in vectors}) != k:
            raise InvariantError("phase vectors must be pairwise distinct")

        self.phase_vectors = vectors.astype(np.int8)
        self.amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != k:
            raise DimensionError(f"{k} phase vectors but {self.amplitudes.size} amplitudes")
        self._support: Optional[BasisSupport] = None

    @classmethod
    def from_state(cls, m: StabilizerMatrix, amplitude: complex = 1.0) -> "StabilizerFrame":
        signs = 1 - 2 * m.sign_bits.astype(np.int64)
        return cls(m, signs.reshape(1, -1), [amplitude])

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def k(self) -> int:
        return self.phase_vectors.shape[0]

    @property
    def sign_bits(self) -> np.ndarray:
        return (self.phase_vectors < 0).astype(np.uint8)

    def copy(self) -> "StabilizerFrame":
        return StabilizerFrame(self.matrix, self.phase_vectors.copy(), self.amplitudes.copy())

    def member(self, i: int) -> StabilizerMatrix:
        m = self.matrix.copy()
        for row, sign in enumerate(self.phase_vectors[i]):
            if sign < 0:
                r = m.row(row)
                m.set_row(row, -r)
        return m

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def is_normalized(self) -> bool:
        return abs(self.norm() - 1.0) <= NORM_TOLERANCE

    def support(self) -> BasisSupport:
        if self._support is None:
            self._support = BasisSupport(self.matrix)
        return self._support


def _rotate(f: StabilizerFrame, g: GateApplication) -> None:
    """Conjugate the shared matrix and move the resulting sign flips into every phase vector."""
    f.matrix.apply_gate(g)
    flips = f.matrix.sign_bits.astype(bool)
    if flips.any():
        f.phase_vectors[:, flips] *= -1
    f.matrix.clear_signs()
    f._support = None


def _gate_image_amplitude(support: BasisSupport, signs: np.ndarray, g: GateApplication, b: np.ndarray) -> complex:
    """Amplitude of basis state ``b`` in U|psi>, from at most two amplitudes of |psi>."""
    if g.kind is GateKind.H:
        q = g.qubits[0]
        low, high = b.copy(), b.copy()
        low[q], high[q] = False, True
        sign = -1 if b[q] else 1
        return (support.amplitude(signs, low) + sign * support.amplitude(signs, high)) / np.sqrt(2)
    if g.kind is GateKind.P:
        q = g.qubits[0]
        return (1j if b[q] else 1) * support.amplitude(signs, b)
    if g.kind is GateKind.CNOT:
        c, t = g.qubits
        source = b.copy()
        source[t] ^= b[c]
        return support.amplitude(signs, source)
    if g.kind is GateKind.CZ:
        c, t = g.qubits
        return (-1 if b[c] and b[t] else 1) * support.amplitude(signs, b)
    raise UnsupportedOperationError(f"frames do not support {g.kind.name}")


def frame_apply_gate(f: StabilizerFrame, g: GateApplication) -> None:
    """Rotate the frame by a unitary gate, keeping every member's global phase in its amplitude."""
    if g.kind is GateKind.MEASURE:
        raise UnsupportedOperationError("measurement is not supported on stabilizer frames")
    g.check(f.n)

    before = f.support()
    before_signs = before.canonical_signs(f.sign_bits)
    _rotate(f, g)
    after = f.support()
    after_signs = after.canonical_signs(f.sign_bits)

    for i in range(f.k):
        target = after.min_support(after_signs[i])
        value = _gate_image_amplitude(before, before_signs[i], g, target)
        if abs(value) < 1e-12:
            raise InvariantError(f"member {i} lost its leading amplitude under {g}")
        f.amplitudes[i] *= value / after.magnitude


def frame_apply_circuit(f: StabilizerFrame, c: Circuit) -> None:
    if c.n != f.n:
        raise DimensionError(f"circuit acts on {c.n} qubits, frame has {f.n}")
    for g in c:
        frame_apply_gate(f, g)


def frame_reconstruct(f: StabilizerFrame) -> DenseState:
    check_oracle_size(f.n)
    total = np.zeros(2 ** f.n, dtype=complex)
    for i in range(f.k):
        total += f.amplitudes[i] * matrix_to_state(f.member(i)).amplitudes
    return DenseState(f.n, total)


def frame_inner_product(f: StabilizerFrame, g: StabilizerFrame) -> float:
    """
    Sum of |a_i||b_j| over member pairs that overlap, scaled by 2^(-s/2).

    Rotates both frames by the normalization circuit of ``f``'s layout, after
    which every member of ``f`` is a basis state. Amplitudes are not tracked
    during the rotation; only their moduli enter the result.
    """
    if f.n != g.n:
        raise DimensionError(f"frames have n={f.n} and n={g.n}")

    circuit, _ = basis_norm_circuit(f.matrix.copy())
    left, right = f.copy(), g.copy()
    for gate in circuit:
        _rotate(left, gate)
        _rotate(right, gate)

    left_signs = replay_signs(left.matrix.canonicalize(), left.sign_bits)
    right_signs = replay_signs(right.matrix.canonicalize(), right.sign_bits)

    right_x = right.matrix.x
    s = int(np.count_nonzero(right_x.any(axis=1)))
    z_rows = right.matrix.z[s:].astype(np.int64)

    # left is now Z_0..Z_{n-1}; a Z row's eigenvalue on member i is the parity of its signs
    left_parity = (left_signs.astype(np.int64) @ z_rows.T) % 2
    right_bits = right_signs[:, s:].astype(np.int64)
    agree = (left_parity[:, None, :] == right_bits[None, :, :]).all(axis=2)

    weights = np.outer(np.abs(left.amplitudes), np.abs(right.amplitudes))
    total = float(np.sum(weights * agree))
    return 2.0 ** (-s / 2) * total


# .frame text format -------------------------------------------------------------

def format_frame(f: StabilizerFrame) -> str:
    lines = [str(f.n)]
    lines.extend(row.literals for row in f.matrix.rows())
    lines.append(str(f.k))
    for vector, amplitude in zip(f.phase_vectors, f.amplitudes):
        signs = "".join("+" if s > 0 else "-" for s in vector)
        lines.append(f"{signs} {float(amplitude.real)!r} {float(amplitude.imag)!r}")
    return "\n".join(lines) + "\n"


def _int_line(numbered, index: int, what: str) -> int:
    if index >= len(numbered):
        last = numbered[-1][0] if numbered else 0
        raise ParseError(f"missing {what}", last + 1, 1)
    no, text = numbered[index]
    if not text.strip().isdigit():
        raise ParseError(f"expected {what}, got {text.strip()!r}", no, 1)
    return int(text)


def parse_frame(text: str) -> StabilizerFrame:
    numbered = [(no, line.strip()) for no, line in enumerate(text.splitlines(), start=1) if line.strip()]
    n = _int_line(numbered, 0, "qubit count")
    if n < 1:
        raise DimensionError("frame needs n >= 1")

    rows = []
    for index in range(1, n + 1):
        if index >= len(numbered):
            raise ParseError(f"expected {n} matrix rows", (numbered[-1][0] + 1), 1)
        no, literals = numbered[index]
        for col, ch in enumerate(literals, start=1):
            if ch not in "IXYZ":
                raise ParseError(f"unknown literal {ch!r}", no, col)
        if len(literals) != n:
            raise ParseError(f"expected {n} literals, got {len(literals)}", no, len(literals) + 1)
        rows.append(PauliString.from_literals(literals))
    matrix = StabilizerMatrix.from_rows(rows)

    k = _int_line(numbered, n + 1, "frame size")
    members = numbered[n + 2:]
    if len(members) != k:
        raise ParseError(f"expected {k} member lines, got {len(members)}", numbered[n + 1][0], 1)

    vectors, amplitudes = [], []
    for no, line in members:
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("member line needs signs, real part and imaginary part", no, 1)
        signs, re_text, im_text = parts
        if len(signs) != n or any(ch not in "+-" for ch in signs):
            raise ParseError(f"expected {n} sign characters", no, 1)
        try:
            amplitudes.append(complex(float(re_text), float(im_text)))
        except ValueError:
            raise ParseError("amplitude is not a number", no, len(signs) + 2) from None
        vectors.append([1 if ch == "+" else -1 for ch in signs])
    return StabilizerFrame(matrix, vectors, amplitudes)


def read_frame(path: Union[str, Path]) -> StabilizerFrame:
    return parse_frame(Path(path).read_text())


def write_frame(path: Union[str, Path], f: StabilizerFrame) -> None:
    Path(path).write_text(format_frame(f))
