"""
Stabilizer matrices: row operations, gate conjugation, canonical form,
measurement and the .stab format.
"""
import numpy as np
import pytest

from errors import DimensionError, InvariantError, ParseError, QubitIndexError, UnsupportedOperationError
from gates import cnot, cz, h, measure, p
from oracle import matrix_to_state
from pauli import parse_pauli
from tableau import (
    BasisSupport,
    RowOp,
    StabilizerMatrix,
    apply_gate,
    canonicalize,
    format_stab,
    gf2_rank,
    parse_stab,
    read_stab,
    replay_signs,
    row_mult,
    row_swap,
    write_stab,
)


def stab(*rows):
    return StabilizerMatrix.from_strings(rows)


def generators(m):
    return [str(r) for r in m.rows()]


def scramble(m, rng, steps=12):
    """Random row swaps and multiplications; the state is unchanged."""
    for _ in range(steps):
        i, j = (int(q) for q in rng.choice(m.n, size=2, replace=False)) if m.n > 1 else (0, 0)
        if i == j:
            continue
        if rng.integers(2):
            m.row_swap(i, j)
        else:
            m.row_mult(i, j)
    return m


class TestConstruction:
    def test_zero_state(self):
        assert generators(StabilizerMatrix.zero_state(3)) == ["+ZII", "+IZI", "+IIZ"]

    def test_zero_qubits_rejected(self):
        with pytest.raises(DimensionError):
            StabilizerMatrix.zero_state(0)
        with pytest.raises(DimensionError):
            StabilizerMatrix(np.zeros((0, 0)), np.zeros((0, 0)))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            stab("XX", "Z")

    def test_anticommuting_rows(self):
        with pytest.raises(InvariantError, match="anticommute"):
            stab("XI", "ZI")

    def test_dependent_rows(self):
        with pytest.raises(InvariantError, match="independent"):
            stab("ZZ", "-ZZ")

    def test_imaginary_phase(self):
        with pytest.raises(InvariantError, match="imaginary"):
            StabilizerMatrix([[1, 0], [0, 0]], [[0, 0], [0, 1]], [1, 0])

    def test_gf2_rank(self):
        assert gf2_rank(np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2
        assert gf2_rank(np.eye(4)) == 4


class TestRowOps:
    def test_swap_same_row(self):
        m = stab("XX", "ZZ")
        row_swap(m, 0, 0)
        assert generators(m) == ["+XX", "+ZZ"]

    def test_swap_keeps_state(self):
        m = stab("XX", "ZZ")
        before = matrix_to_state(m)
        row_swap(m, 0, 1)
        assert generators(m) == ["+ZZ", "+XX"]
        np.testing.assert_allclose(matrix_to_state(m).amplitudes, before.amplitudes, atol=1e-12)

    def test_swap_twice(self):
        m = stab("XX", "ZZ")
        m.row_swap(0, 1)
        m.row_swap(0, 1)
        assert m == stab("XX", "ZZ")

    def test_swap_out_of_range(self):
        with pytest.raises(QubitIndexError):
            stab("XX", "ZZ").row_swap(0, 2)

    def test_mult_examples(self):
        m = stab("XX", "ZZ")
        row_mult(m, 1, 0)
        assert generators(m) == ["+XX", "-YY"]
        row_mult(m, 1, 0)
        assert generators(m) == ["+XX", "+ZZ"]

    def test_mult_same_row_rejected(self):
        with pytest.raises(InvariantError):
            stab("XX", "ZZ").row_mult(1, 1)

    def test_mult_keeps_state(self, random_state, rng):
        for n in range(2, 6):
            m = random_state(n)
            before = matrix_to_state(m)
            scramble(m, rng)
            m.validate()
            assert set(m.phase) <= {0, 2}
            np.testing.assert_allclose(matrix_to_state(m).amplitudes, before.amplitudes, atol=1e-10)


class TestApplyGate:
    def test_bell_under_cnot(self):
        m = stab("XX", "ZZ")
        apply_gate(m, cnot(0, 1))
        assert generators(m) == ["+XI", "+IZ"]

    def test_hh_is_identity(self, random_state):
        m = random_state(4)
        before = m.copy()
        m.apply_gate(h(2))
        m.apply_gate(h(2))
        assert m == before

    def test_measurement_rejected(self):
        with pytest.raises(UnsupportedOperationError):
            StabilizerMatrix.zero_state(1).apply_gate(measure(0))

    def test_out_of_range(self):
        with pytest.raises(QubitIndexError):
            StabilizerMatrix.zero_state(2).apply_gate(cz(0, 2))

    def test_literal_writes_linear(self, random_state, random_circuit):
        n = 12
        m = random_state(n)
        for g in random_circuit(n, depth=40, kinds=("h", "p", "cnot", "cz")):
            start = m.literal_writes
            m.apply_gate(g)
            assert m.literal_writes - start <= 2 * n

    def test_preserves_invariants(self, random_state, random_circuit):
        m = random_state(6)
        for g in random_circuit(6, depth=50, kinds=("h", "p", "cnot", "cz")):
            m.apply_gate(g)
        m.validate()

    def test_matches_dense_simulation(self, random_circuit, assert_same_state):
        from oracle import DenseState, apply_dense_circuit

        for n in range(1, 6):
            circuit = random_circuit(n, kinds=("h", "p", "cnot", "cz"))
            m = StabilizerMatrix.zero_state(n)
            for g in circuit:
                m.apply_gate(g)
            dense = DenseState.zero(n)
            apply_dense_circuit(dense, circuit)
            assert_same_state(matrix_to_state(m), dense.phase_fixed())


class TestCanonicalize:
    def test_bell_forms_agree(self):
        a = stab("-YY", "ZZ")
        b = stab("XX", "ZZ")
        canonicalize(a)
        canonicalize(b)
        assert a == b
        assert generators(a) == ["+XX", "+ZZ"]

    def test_basis_form_unchanged(self):
        m = stab("ZII", "-IZI", "IIZ")
        before = m.copy()
        assert m.canonicalize() == []
        assert m == before

    def test_idempotent(self, random_state):
        for n in range(1, 7):
            m = random_state(n)
            m.canonicalize()
            snapshot = m.copy()
            assert m.canonicalize() == []
            assert m == snapshot

    def test_log_entries(self):
        m = stab("ZZ", "XX")
        log = m.canonicalize()
        assert log[0] == RowOp("swap", 0, 1)
        assert all(op.kind in ("swap", "mult") for op in log)

    def test_echelon_shape(self, random_state):
        for _ in range(20):
            m = random_state(6)
            m.canonicalize()
            x, z = m.x, m.z
            x_rows = [i for i in range(m.n) if x[i].any()]
            assert x_rows == list(range(len(x_rows)))
            leads = [int(np.argmax(x[i])) for i in x_rows]
            assert leads == sorted(set(leads))
            for i, col in zip(x_rows, leads):
                assert np.count_nonzero(x[:, col]) == 1
            z_leads = [int(np.argmax(z[i])) for i in range(len(x_rows), m.n)]
            assert z_leads == sorted(set(z_leads))
            for col in z_leads:
                assert np.count_nonzero(z[len(x_rows):, col]) == 1

    def test_pivot_columns_hold_two_literal_kinds(self, random_state, rng):
        for _ in range(300):
            m = random_state(int(rng.integers(1, 7)))
            m.canonicalize()
            x_rank = int(np.count_nonzero(m.x.any(axis=1)))
            for row in range(m.n):
                col = int(np.argmax(m.x[row] if row < x_rank else m.z[row]))
                kinds = {m.literal(r, col) for r in range(m.n)} - {"I"}
                pivot = m.literal(row, col)
                if row < x_rank:
                    assert pivot in ("X", "Y")
                    assert kinds <= {pivot, "Z"}
                else:
                    assert pivot == "Z"
                    assert kinds <= {"Z", "X"}

    def test_other_columns_may_hold_three_kinds(self):
        m = StabilizerMatrix.from_strings(["+XZZIXZ", "+IXIIYI", "-IIXIYZ", "-IZIIZX", "+ZZZIZI", "-IIIZII"])
        assert m.canonicalize() == []
        assert {m.literal(r, 4) for r in range(6)} - {"I"} == {"X", "Y", "Z"}

    def test_state_unchanged(self, random_state):
        for _ in range(100):
            m = random_state(6)
            before = matrix_to_state(m)
            m.canonicalize()
            np.testing.assert_allclose(matrix_to_state(m).amplitudes, before.amplitudes, atol=1e-10)

    def test_unique_per_state(self, random_state, rng):
        for n in range(1, 5):
            for _ in range(10):
                m = random_state(n)
                other = scramble(m.copy(), rng)
                assert m.canonical_key() == other.canonical_key()

    def test_key_distinguishes_states(self):
        from geometry import enumerate_states

        states = enumerate_states(2)
        vectors = [matrix_to_state(s).amplitudes for s in states]
        keys = {s.canonical_key() for s in states}
        assert len(keys) == len(states)
        for i in range(len(states)):
            for j in range(i + 1, len(states)):
                assert abs(abs(np.vdot(vectors[i], vectors[j])) - 1.0) > 1e-6

    def test_replay_matches_signed_reduction(self, random_state, rng):
        for n in range(1, 7):
            m = random_state(n)
            scramble(m, rng)
            log = m.unsigned().canonicalize()
            expected = m.copy()
            expected.canonicalize()
            assert np.array_equal(replay_signs(log, m.sign_bits), expected.sign_bits)

    def test_replay_stack(self, random_state):
        m = random_state(4)
        log = m.unsigned().canonicalize()
        bits = np.array([[0, 0, 0, 0], [1, 0, 1, 1], [0, 1, 1, 0]], dtype=np.uint8)
        stacked = replay_signs(log, bits)
        for row, out in zip(bits, stacked):
            assert np.array_equal(replay_signs(log, row), out)


class TestMeasure:
    def test_zero_state_deterministic(self):
        m = StabilizerMatrix.zero_state(4)
        for q in range(4):
            outcome = m.measure(q, rng=0)
            assert outcome.bit == 0
            assert outcome.deterministic

    def test_one_state(self):
        outcome = stab("-Z").measure(0)
        assert (outcome.bit, outcome.deterministic) == (1, True)

    def test_bell_correlation(self):
        seen = set()
        for seed in range(40):
            m = stab("XX", "ZZ")
            first = m.measure(0, rng=seed)
            assert not first.deterministic
            second = m.measure(1, rng=seed + 1000)
            assert second.deterministic
            assert second.bit == first.bit
            m.validate()
            seen.add(first.bit)
        assert seen == {0, 1}

    def test_collapsed_state_matches_outcome(self):
        for seed in range(10):
            m = stab("XX", "ZZ")
            bit = m.measure(0, rng=seed).bit
            expected = np.zeros(4)
            expected[3 if bit else 0] = 1.0
            np.testing.assert_allclose(matrix_to_state(m).amplitudes, expected, atol=1e-12)

    def test_plus_state_statistics(self, rng):
        zeros = 0
        trials = 10_000
        for _ in range(trials):
            zeros += stab("X").measure(0, rng).bit == 0
        assert abs(zeros / trials - 0.5) <= 0.02

    def test_deterministic_after_entangling(self, random_state, rng):
        m = random_state(5)
        bits = [m.measure(q, rng).bit for q in range(5)]
        again = [m.measure(q, rng) for q in range(5)]
        assert all(o.deterministic for o in again)
        assert [o.bit for o in again] == bits

    def test_out_of_range(self):
        with pytest.raises(QubitIndexError):
            StabilizerMatrix.zero_state(2).measure(5)


class TestBasisSupport:
    def test_amplitudes_match_oracle(self, random_state, rng):
        for n in range(1, 5):
            for _ in range(10):
                m = random_state(n)
                signs = rng.integers(2, size=n).astype(np.uint8)
                signed = m.unsigned()
                for row, bit in enumerate(signs):
                    if bit:
                        signed.set_row(row, -signed.row(row))
                dense = matrix_to_state(signed).amplitudes

                support = BasisSupport(m)
                canonical = support.canonical_signs(signs)
                for index in range(2 ** n):
                    b = np.array([(index >> (n - 1 - q)) & 1 for q in range(n)], dtype=bool)
                    assert abs(support.amplitude(canonical, b) - dense[index]) < 1e-12
                first = int(np.flatnonzero(np.abs(dense) > 1e-9)[0])
                lead = support.min_support(canonical)
                assert int("".join(str(int(v)) for v in lead), 2) == first

    def test_magnitude(self):
        assert BasisSupport(stab("XX", "ZZ")).magnitude == 2 ** -0.5
        assert BasisSupport(stab("ZI", "IZ")).magnitude == 1.0


class TestBasisForm:
    def test_basis_bits(self):
        m = stab("IZI", "-ZII", "-IIZ")
        assert m.is_basis_form()
        assert m.basis_bits() == [1, 0, 1]

    def test_not_basis_form(self):
        m = stab("XX", "ZZ")
        assert not m.is_basis_form()
        with pytest.raises(InvariantError):
            m.basis_bits()


class TestStabFormat:
    def test_round_trip(self, random_state):
        for n in range(1, 7):
            m = random_state(n)
            text = format_stab(m)
            assert format_stab(parse_stab(text)) == text
            assert parse_stab(text) == m

    def test_text(self):
        assert format_stab(stab("XX", "-ZZ")) == "2\n+XX\n-ZZ\n"

    def test_files(self, tmp_path):
        m = stab("XX", "-ZZ")
        path = tmp_path / "bell.stab"
        write_stab(path, m)
        assert read_stab(path) == m

    @pytest.mark.parametrize(
        "text,line,column",
        [
            ("2\n+XX\n+ZQ\n", 3, 3),
            ("2\n*XX\n+ZZ\n", 2, 1),
            ("2\n+XX\n", 3, 1),
            ("2\n+XXX\n+ZZ\n", 2, 5),
            ("two\n+XX\n+ZZ\n", 1, 1),
        ],
    )
    def test_parse_errors(self, text, line, column):
        with pytest.raises(ParseError) as info:
            parse_stab(text)
        assert (info.value.line, info.value.column) == (line, column)

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_stab("")

    def test_zero_width(self):
        with pytest.raises(DimensionError):
            parse_stab("0\n")

    def test_invalid_state(self):
        with pytest.raises(InvariantError):
            parse_stab("2\n+XI\n+ZI\n")
        assert parse_stab("2\n+XI\n+ZI\n", validate=False).n == 2

    def test_pauli_rows(self):
        m = parse_stab("2\n-XX\n+ZZ\n")
        assert m.row(0) == parse_pauli("-XX")
        assert m.literal(0, 1) == "X"
