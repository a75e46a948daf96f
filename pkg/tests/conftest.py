import os

os.environ.setdefault("STABKIT_SKIP_DOTENV", "1")

import numpy as np
import pytest

from config import reset_settings
from gates import Circuit, cnot, cz, h, p
from oracle import DenseState, fidelity
from tableau import StabilizerMatrix


@pytest.fixture
def fresh_settings():
    """Re-read STABKIT_* variables before and after the test."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def _random_unitary_circuit(n, rng, depth=None, kinds=("h", "p", "cnot")):
    depth = depth if depth is not None else 4 * n + 4
    circuit = Circuit(n)
    for _ in range(depth):
        kind = kinds[int(rng.integers(len(kinds)))] if n > 1 else ("h", "p")[int(rng.integers(2))]
        if kind in ("cnot", "cz"):
            a, b = (int(q) for q in rng.choice(n, size=2, replace=False))
            circuit.append(cnot(a, b) if kind == "cnot" else cz(a, b))
        else:
            q = int(rng.integers(n))
            circuit.append(h(q) if kind == "h" else p(q))
    return circuit


@pytest.fixture
def random_circuit(rng):
    """Factory: random unitary circuit on n qubits drawn from the shared rng."""

    def make(n, depth=None, kinds=("h", "p", "cnot")):
        return _random_unitary_circuit(n, rng, depth, kinds)

    return make


@pytest.fixture
def random_state(random_circuit):
    """Factory: random stabilizer state as a tableau, reached from |0...0>."""

    def make(n, depth=None):
        m = StabilizerMatrix.zero_state(n)
        for g in random_circuit(n, depth):
            m.apply_gate(g)
        return m

    return make


def same_state(a: DenseState, b: DenseState, tol: float = 1e-10) -> bool:
    return abs(fidelity(a, b) - 1.0) <= tol


@pytest.fixture
def assert_same_state():
    def check(a: DenseState, b: DenseState, tol: float = 1e-10):
        assert a.n == b.n
        assert same_state(a, b, tol), f"fidelity {fidelity(a, b)}"

    return check
