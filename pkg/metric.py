"""
Inner-product magnitude between stabilizer states.

|<a|b>| is either 0 or 2^(-s/2): map ``a`` to a basis state with its
normalization circuit, push ``b`` through the same circuit, reduce it and
count the rows that still carry X/Y literals. Pure-Z rows decide
orthogonality by comparing their sign against the matching product of
``a``'s basis-form rows.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from errors import DimensionError
from pauli import PauliString
from synth import basis_norm_circuit
from tableau import StabilizerMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InnerProductResult:
    magnitude: float
    s_exponent: Optional[int]

    @property
    def orthogonal(self) -> bool:
        return self.s_exponent is None

    @property
    def expression(self) -> str:
        if self.orthogonal:
            return "0"
        return f"2^-{self.s_exponent}/2"

    def format(self) -> str:
        return f"{self.expression} ≈ {self.magnitude:.8f}"

    @classmethod
    def from_exponent(cls, s: Optional[int]) -> "InnerProductResult":
        if s is None:
            return cls(0.0, None)
        return cls(2.0 ** (-s / 2), s)


def _product_over(rows, positions) -> PauliString:
    product = PauliString.identity(rows[0].n)
    for q in positions:
        product = product * rows[q]
    return product


def inner_product(a: StabilizerMatrix, b: StabilizerMatrix) -> InnerProductResult:
    if a.n != b.n:
        raise DimensionError(f"states have n={a.n} and n={b.n}")

    basis = a.copy()
    circuit, _ = basis_norm_circuit(basis)
    rotated = b.copy()
    for g in circuit:
        rotated.apply_gate(g)
    rotated.canonicalize()

    # basis-form rows indexed by the qubit carrying their Z
    by_qubit = [None] * a.n
    for row in basis.rows():
        by_qubit[int(np.argmax(row.z))] = row

    k = 0
    for q_row in rotated.rows():
        if q_row.x.any():
            k += 1
            continue
        r = _product_over(by_qubit, np.flatnonzero(q_row.z))
        if (r.phase_exp - q_row.phase_exp) % 4 == 2:
            logger.debug(f"[IP] orthogonal on row {q_row}")
            return InnerProductResult.from_exponent(None)
    return InnerProductResult.from_exponent(k)


def angle(a: StabilizerMatrix, b: StabilizerMatrix) -> float:
    result = inner_product(a, b)
    if result.orthogonal:
        return math.pi / 2
    return math.acos(min(result.magnitude, 1.0))
