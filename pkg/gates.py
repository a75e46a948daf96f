"""
Gate applications, circuits and the .qc text format.

A .qc file has one gate per line (``h q``, ``p q``, ``cnot c t``, ``cz c t``,
``m q``); ``#`` starts a comment. The printer emits a ``# qubits <n>``
directive first, which the parser honours so a printed circuit reads back
with the same width.
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Tuple

from errors import DimensionError, ParseError, check_index

logger = logging.getLogger(__name__)


class GateKind(str, Enum):
    H = "h"
    P = "p"
    CNOT = "cnot"
    CZ = "cz"
    MEASURE = "m"

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CNOT, GateKind.CZ) else 1

    @property
    def is_unitary(self) -> bool:
        return self is not GateKind.MEASURE


@dataclass(frozen=True)
class GateApplication:
    kind: GateKind
    qubits: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise DimensionError(
                f"{self.kind.name} takes {self.kind.arity} qubit(s), got {len(self.qubits)}"
            )
        if any(q < 0 for q in self.qubits):
            raise DimensionError(f"negative qubit index in {self}")
        if self.kind.arity == 2 and self.qubits[0] == self.qubits[1]:
            raise DimensionError(f"{self.kind.name} needs distinct qubits, got {self.qubits}")

    def check(self, n: int) -> "GateApplication":
        for q in self.qubits:
            check_index(q, n)
        return self

    def __str__(self) -> str:
        return " ".join([self.kind.value, *map(str, self.qubits)])


def h(q: int) -> GateApplication:
    return GateApplication(GateKind.H, (q,))


def p(q: int) -> GateApplication:
    return GateApplication(GateKind.P, (q,))


def cnot(control: int, target: int) -> GateApplication:
    return GateApplication(GateKind.CNOT, (control, target))


def cz(a: int, b: int) -> GateApplication:
    return GateApplication(GateKind.CZ, (a, b))


def measure(q: int) -> GateApplication:
    return GateApplication(GateKind.MEASURE, (q,))


@dataclass(frozen=True)
class MeasurementRecord:
    qubit: int
    bit: int
    deterministic: bool


@dataclass
class Circuit:
    n: int
    gates: List[GateApplication] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"circuit needs n >= 1, got {self.n}")
        for g in self.gates:
            g.check(self.n)

    def append(self, g: GateApplication) -> None:
        self.gates.append(g.check(self.n))

    def extend(self, gates: Iterable[GateApplication]) -> None:
        for g in gates:
            self.append(g)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[GateApplication]:
        return iter(self.gates)

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind(kind))

    @property
    def is_unitary(self) -> bool:
        return all(g.kind.is_unitary for g in self.gates)


_QUBITS_DIRECTIVE = re.compile(r"^#\s*qubits\s+(\d+)\s*$")


def format_qc(circuit: Circuit) -> str:
    lines = [f"# qubits {circuit.n}"]
    lines.extend(str(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def parse_qc(text: str, n: Optional[int] = None) -> Circuit:
    """
    Parse .qc text.

    Args:
        text: circuit text
        n: qubit count; overrides a ``# qubits`` directive. When neither is
           given the width is one more than the largest index used.
    """
    declared: Optional[int] = None
    gates: List[GateApplication] = []
    # (line, column) of every operand, for range errors once the width is known
    operands: List[List[Tuple[int, int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        directive = _QUBITS_DIRECTIVE.match(raw.strip())
        if directive:
            declared = int(directive.group(1))
            continue
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        tokens = body.split()
        name = tokens[0].lower()
        try:
            kind = GateKind(name)
        except ValueError:
            column = raw.index(tokens[0]) + 1
            raise ParseError(f"unknown gate {tokens[0]!r}", lineno, column) from None
        if len(tokens) - 1 != kind.arity:
            raise ParseError(
                f"{name} expects {kind.arity} operand(s), got {len(tokens) - 1}", lineno, 1
            )
        qubits = []
        where = []
        search_from = raw.index(tokens[0]) + len(tokens[0])
        for token in tokens[1:]:
            column = raw.index(token, search_from) + 1
            search_from = column - 1 + len(token)
            if not token.isdigit():
                raise ParseError(f"bad qubit index {token!r}", lineno, column)
            qubits.append(int(token))
            where.append((lineno, column))
        try:
            gates.append(GateApplication(kind, tuple(qubits)))
        except DimensionError as e:
            raise ParseError(e.detail, lineno, 1) from None
        operands.append(where)

    width = n if n is not None else declared
    if width is None:
        width = 1 + max((q for g in gates for q in g.qubits), default=0)
    for g, where in zip(gates, operands):
        for q, (lineno, column) in zip(g.qubits, where):
            if q >= width:
                raise ParseError(f"qubit index {q} out of range for n={width}", lineno, column)
    try:
        return Circuit(width, gates)
    except DimensionError as e:
        raise ParseError(e.detail) from None
