"""
Basis-normalization circuit synthesis.

``basis_norm_circuit`` drives a stabilizer matrix to basis form and records
the gates that do it. The emitted circuit always factors into five blocks:
H, CNOT, CZ, P, H. Row operations reshape the generator set without touching
the state and are never part of the circuit.
"""
import logging
from collections import Counter
from typing import List, Optional, Tuple

import numpy as np

from errors import DimensionError, InvariantError, UnsupportedOperationError
from gates import (
    Circuit,
    GateApplication,
    GateKind,
    MeasurementRecord,
    cnot,
    cz,
    h,
    p,
)
from tableau import RngLike, StabilizerMatrix

logger = logging.getLogger(__name__)

TEMPLATE = (GateKind.H, GateKind.CNOT, GateKind.CZ, GateKind.P, GateKind.H)

# Diagnostics for the Hadamard sweep: columns with neither an X/Y nor a Z
# candidate row, and extra eliminations below the diagonal.
SYNTH_COUNTERS: Counter = Counter()


def max_gate_count(n: int) -> int:
    """Upper bound on the size of any synthesized circuit."""
    return n * n + 2 * n


def _emit(m: StabilizerMatrix, circuit: Circuit, g: GateApplication) -> None:
    m.apply_gate(g)
    circuit.append(g)


def _clear_column_below(m: StabilizerMatrix, j: int, plane: np.ndarray) -> None:
    """Multiply row j into every lower row whose entry in plane (one tableau column) is set."""
    targets = np.flatnonzero(plane[j + 1:]) + j + 1
    if targets.size:
        SYNTH_COUNTERS["subdiagonal_eliminations"] += int(targets.size)
        m.mult_rows(targets, j)


def _hadamard_sweep(m: StabilizerMatrix, circuit: Circuit) -> None:
    n = m.n
    for j in range(n):
        xs = m.x[:, j]
        candidates = np.flatnonzero(xs[j:])
        if candidates.size:
            m.row_swap(j, j + int(candidates[0]))
            _clear_column_below(m, j, m.x[:, j])
            continue

        zs = m.z[:, j]
        candidates = np.flatnonzero(zs[j:])
        if candidates.size == 0:
            SYNTH_COUNTERS["empty_columns"] += 1
            logger.debug(f"[SYNTH] column {j} has no X/Y or Z candidate; skipped")
            continue
        m.row_swap(j, j + int(candidates[-1]))
        right = m.x[j, j + 1:] | m.z[j, j + 1:]
        if right.any():
            _clear_column_below(m, j, m.z[:, j])
            _emit(m, circuit, h(j))


def basis_norm_circuit(m: StabilizerMatrix) -> Tuple[Circuit, List[int]]:
    """
    Reduce ``m`` to basis form in place and return the circuit that does it.

    Args:
        m: stabilizer matrix; consumed

    Returns:
        (circuit, bits) where applying the circuit to the original state
        gives the basis state |bits>, bits indexed by qubit.
    """
    n = m.n
    circuit = Circuit(n)
    m.canonicalize()

    _hadamard_sweep(m, circuit)

    for j in range(n):
        for k in np.flatnonzero(m.x[j, j + 1:]) + j + 1:
            _emit(m, circuit, cnot(j, int(k)))

    for j in range(n):
        for k in range(j + 1, n):
            if m.literal(j, k) == "Z":
                _emit(m, circuit, cz(j, k))

    for j in range(n):
        if m.literal(j, j) == "Y":
            _emit(m, circuit, p(j))

    for j in range(n):
        if m.literal(j, j) == "X":
            _emit(m, circuit, h(j))

    for j in range(n):
        targets = np.flatnonzero(m.z[j + 1:, j]) + j + 1
        if targets.size:
            m.mult_rows(targets, j)

    if not m.is_basis_form():
        raise InvariantError("synthesis did not reach basis form")
    bits = [int(b) for b in m.sign_bits]
    logger.debug(f"[SYNTH] n={n} gates={len(circuit)} bits={''.join(map(str, bits))}")
    return circuit, bits


def reverse(c: Circuit) -> Circuit:
    """Inverse circuit: gates in reverse order, each P replaced by PPP."""
    inverse = Circuit(c.n)
    for g in reversed(c.gates):
        if g.kind is GateKind.MEASURE:
            raise UnsupportedOperationError("cannot invert a circuit containing measurements")
        if g.kind is GateKind.P:
            inverse.extend([g, g, g])
        else:
            inverse.append(g)
    return inverse


def template_blocks(c: Circuit) -> List[Tuple[GateKind, int]]:
    """Maximal runs of equal gate kinds, in order."""
    blocks: List[Tuple[GateKind, int]] = []
    for g in c.gates:
        if blocks and blocks[-1][0] is g.kind:
            blocks[-1] = (g.kind, blocks[-1][1] + 1)
        else:
            blocks.append((g.kind, 1))
    return blocks


def conforms_to_template(c: Circuit) -> bool:
    position = 0
    for kind, _ in template_blocks(c):
        while position < len(TEMPLATE) and TEMPLATE[position] is not kind:
            position += 1
        if position == len(TEMPLATE):
            return False
        position += 1
    return True


def apply_circuit(target, c: Circuit, rng: RngLike = None) -> List[MeasurementRecord]:
    """
    Run ``c`` on a StabilizerMatrix, DenseState or StabilizerFrame in place.

    Returns:
        One record per measurement gate, in circuit order.
    """
    from frames import StabilizerFrame, frame_apply_gate
    from oracle import DenseState, dense_apply

    if not isinstance(target, (StabilizerMatrix, DenseState, StabilizerFrame)):
        raise TypeError(f"cannot apply a circuit to {type(target).__name__}")
    if target.n != c.n:
        raise DimensionError(f"circuit acts on {c.n} qubits, target has {target.n}")

    rng = np.random.default_rng(rng)
    record: List[MeasurementRecord] = []
    for g in c.gates:
        if isinstance(target, StabilizerMatrix):
            if g.kind is GateKind.MEASURE:
                outcome = target.measure(g.qubits[0], rng)
                record.append(MeasurementRecord(g.qubits[0], outcome.bit, outcome.deterministic))
            else:
                target.apply_gate(g)
        elif isinstance(target, DenseState):
            result: Optional[MeasurementRecord] = dense_apply(target, g, rng)
            if result is not None:
                record.append(result)
        else:
            frame_apply_gate(target, g)
    return record
