"""
Geometry of the stabilizer-state space: equal superpositions of a state with
a Pauli image, nearest neighbours, exhaustive enumeration and the tabular
report of a state space against a base state.
"""
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from config import get_settings
from errors import CapacityError, DimensionError, InvariantError
from gates import cnot, h, p
from metric import inner_product
from oracle import matrix_to_state
from pauli import PauliString, conjugate_gate
from synth import apply_circuit, basis_norm_circuit, reverse
from tableau import StabilizerMatrix

logger = logging.getLogger(__name__)

ANGLE_LABELS = {0: "0", 1: "π/4", 2: "π/3"}


@dataclass
class NeighborSet:
    base: StabilizerMatrix
    neighbors: List[StabilizerMatrix] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.neighbors)

    @staticmethod
    def expected_size(n: int) -> int:
        return 4 * (2 ** n - 1)


def ghz_state(n: int) -> StabilizerMatrix:
    """(|0...0> + |1...1>)/sqrt(2): X on every qubit plus a Z_i Z_{i+1} chain."""
    rows = ["X" * n]
    for i in range(n - 1):
        rows.append("I" * i + "ZZ" + "I" * (n - i - 2))
    return StabilizerMatrix.from_strings(rows)


def _pair_generators(bits: Sequence[int], support: np.ndarray, t: int) -> StabilizerMatrix:
    """
    Generators of (|b> + i^t |b xor v>)/sqrt(2), v = ``support`` nonzero.

    Built for b = 0 and then conjugated by X(b), which flips the sign of every
    generator with an odd number of Z/Y literals on the 1-bits of b.
    """
    n = len(bits)
    chosen = [int(q) for q in np.flatnonzero(support)]
    rows: List[PauliString] = []

    head = PauliString.identity(n)
    head.x[chosen] = True
    if t % 2:
        head.z[chosen[0]] = True
        head.phase_exp = 0 if t % 4 == 1 else 2
    else:
        head.phase_exp = t % 4
    rows.append(head)

    for a, b in zip(chosen, chosen[1:]):
        link = PauliString.identity(n)
        link.z[[a, b]] = True
        rows.append(link)
    for q in range(n):
        if not support[q]:
            rows.append(PauliString.single(n, q, "Z"))

    flips = np.array(bits, dtype=bool)
    for row in rows:
        if np.count_nonzero(row.z & flips) % 2:
            row.phase_exp = (row.phase_exp + 2) % 4
    return StabilizerMatrix.from_rows(rows, validate=False)


def superpose(psi: StabilizerMatrix, pauli: PauliString) -> StabilizerMatrix:
    """
    Stabilizer matrix of (|psi> + P|psi>)/sqrt(2).

    Raises:
        InvariantError: P|psi> is proportional to |psi>
    """
    if pauli.n != psi.n:
        raise DimensionError(f"Pauli acts on {pauli.n} qubits, state has n={psi.n}")
    work = psi.copy()
    circuit, bits = basis_norm_circuit(work)
    rotated = pauli
    for g in circuit:
        rotated = conjugate_gate(rotated, g)
    t, v, u = rotated.operator_form()
    if not v.any():
        raise InvariantError(f"{pauli} maps the state to a multiple of itself")
    t = (t + 2 * int(np.count_nonzero(u & np.array(bits, dtype=bool)))) % 4

    result = _pair_generators(bits, v, t)
    apply_circuit(result, reverse(circuit))
    return result


def _neighbors_in_frame(bits: Sequence[int]) -> Iterable[StabilizerMatrix]:
    n = len(bits)
    for d in range(1, 2 ** n):
        support = np.array([(d >> (n - 1 - q)) & 1 for q in range(n)], dtype=bool)
        for t in range(4):
            yield _pair_generators(bits, support, t)


def nearest_neighbors(psi: StabilizerMatrix) -> NeighborSet:
    """All 4(2^n - 1) stabilizer states at inner product 2^(-1/2) from ``psi``."""
    work = psi.copy()
    circuit, bits = basis_norm_circuit(work)
    undo = reverse(circuit)

    result = NeighborSet(base=psi.copy())
    seen = set()
    for state in _neighbors_in_frame(bits):
        apply_circuit(state, undo)
        key = state.canonical_key()
        if key in seen:
            raise InvariantError(f"duplicate neighbour generated:\n{key}")
        seen.add(key)
        result.neighbors.append(state)
    logger.debug(f"[GEOMETRY] n={psi.n} neighbours={len(result)}")
    return result


def _closure_gates(n: int):
    gates = [h(q) for q in range(n)] + [p(q) for q in range(n)]
    gates += [cnot(c, t) for c in range(n) for t in range(n) if c != t]
    return gates


def enumerate_states(n: int) -> List[StabilizerMatrix]:
    """Every n-qubit stabilizer state, in canonical form, by breadth-first closure."""
    if n < 1:
        raise DimensionError("enumeration needs n >= 1")
    limit = get_settings().enumerate_max_qubits
    if n > limit:
        raise CapacityError(f"enumeration limited to n <= {limit}; n={n} is too large")

    start = StabilizerMatrix.zero_state(n)
    start.canonicalize()
    states: Dict[str, StabilizerMatrix] = {start.canonical_key(): start}
    queue = deque([start])
    gates = _closure_gates(n)
    while queue:
        state = queue.popleft()
        for g in gates:
            child = state.copy()
            child.apply_gate(g)
            child.canonicalize()
            key = str(child)
            if key not in states:
                states[key] = child
                queue.append(child)
    logger.info(f"[GEOMETRY] enumerated {len(states)} stabilizer states for n={n}")
    return list(states.values())


def state_count(n: int) -> int:
    """Closed-form number of n-qubit stabilizer states."""
    count = 2 ** n
    for k in range(n):
        count *= 2 ** (n - k) + 1
    return count


def _shorthand(value: complex, unit: float) -> str:
    if abs(value) < 1e-9:
        return "0"
    scaled = value / unit
    for label, target in (("1", 1), ("-1", -1), ("i", 1j), ("-i", -1j)):
        if abs(scaled - target) < 1e-6:
            return label
    return f"{scaled.real:.3f}{scaled.imag:+.3f}i"


def amplitude_shorthand(m: StabilizerMatrix) -> str:
    """Amplitudes in units of their common modulus, e.g. ``1,0,0,-1``."""
    amplitudes = matrix_to_state(m).amplitudes
    unit = float(np.max(np.abs(amplitudes)))
    return ",".join(_shorthand(a, unit) for a in amplitudes)


def angle_label(s_exponent: Optional[int]) -> str:
    if s_exponent is None:
        return "⊥"
    if s_exponent in ANGLE_LABELS:
        return ANGLE_LABELS[s_exponent]
    return f"π/{math.pi / math.acos(2.0 ** (-s_exponent / 2)):.2f}"


def generators_text(m: StabilizerMatrix) -> str:
    return ", ".join(
        ("-" if row.phase_exp == 2 else "") + row.literals for row in m.rows()
    )


def states_report(states: Sequence[StabilizerMatrix], base: Optional[StabilizerMatrix] = None) -> pd.DataFrame:
    """One row per state: amplitudes, generators and the angle to ``base`` (|0...0> by default)."""
    if not states:
        return pd.DataFrame(columns=["amplitudes", "generators", "s_exponent", "magnitude", "angle", "angle_label"])
    if base is None:
        base = StabilizerMatrix.zero_state(states[0].n)
    records = []
    for state in states:
        result = inner_product(base, state)
        records.append(
            {
                "amplitudes": amplitude_shorthand(state) if state.n <= get_settings().oracle_max_qubits else "",
                "generators": generators_text(state),
                "s_exponent": result.s_exponent,
                "magnitude": result.magnitude,
                "angle": math.pi / 2 if result.orthogonal else math.acos(min(result.magnitude, 1.0)),
                "angle_label": angle_label(result.s_exponent),
            }
        )
    df = pd.DataFrame.from_records(records)
    df["s_exponent"] = df["s_exponent"].astype("Int64")
    return df
