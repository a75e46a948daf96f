import cmath

import numpy as np
import pytest

from errors import DimensionError, InvariantError, ParseError, UnsupportedOperationError
from frames import (
    StabilizerFrame,
    format_frame,
    frame_apply_circuit,
    frame_apply_gate,
    frame_inner_product,
    frame_reconstruct,
    parse_frame,
    read_frame,
    write_frame,
)
from gates import Circuit, h, measure, p
from geometry import ghz_state
from metric import inner_product
from oracle import apply_dense_circuit, dense_inner_product, matrix_to_state
from synth import apply_circuit
from tableau import StabilizerMatrix, replay_signs

SQRT_HALF = 2 ** -0.5


def stab(*rows):
    return StabilizerMatrix.from_strings(rows)


@pytest.fixture
def random_frame(random_state, rng):
    def make(n, k):
        matrix = random_state(n)
        chosen = rng.choice(2 ** n, size=k, replace=False)
        vectors = [[-1 if (int(c) >> q) & 1 else 1 for q in range(n)] for c in chosen]
        amplitudes = rng.normal(size=k) + 1j * rng.normal(size=k)
        amplitudes /= np.linalg.norm(amplitudes)
        return StabilizerFrame(matrix, vectors, amplitudes)

    return make


class TestConstruction:
    def test_signs_move_into_phase_vectors(self):
        f = StabilizerFrame.from_state(stab("-XX", "ZZ"))
        assert f.matrix.sign_bits.tolist() == [0, 0]
        assert f.phase_vectors.tolist() == [[-1, 1]]
        assert f.k == 1 and f.n == 2

    def test_member_installs_signs(self):
        f = StabilizerFrame(stab("ZI", "IZ"), [[1, 1], [-1, 1]], [SQRT_HALF, SQRT_HALF])
        assert [str(r) for r in f.member(1).rows()] == ["-ZI", "+IZ"]

    def test_duplicate_vectors(self):
        with pytest.raises(InvariantError):
            StabilizerFrame(stab("Z"), [[1], [1]], [0.5, 0.5])

    def test_entries_must_be_signs(self):
        with pytest.raises(InvariantError):
            StabilizerFrame(stab("Z"), [[0]], [1])

    def test_too_many_members(self):
        with pytest.raises(InvariantError):
            StabilizerFrame(stab("Z"), [[1], [-1], [1]], [1, 1, 1])

    def test_amplitude_count(self):
        with pytest.raises(DimensionError):
            StabilizerFrame(stab("Z"), [[1], [-1]], [1])

    def test_vector_width(self):
        with pytest.raises(DimensionError):
            StabilizerFrame(stab("Z"), [[1, 1]], [1])

    def test_norm(self, random_frame):
        f = random_frame(3, 4)
        assert f.is_normalized()
        f.amplitudes *= 2
        assert not f.is_normalized()


class TestApplyGate:
    def test_hadamard_on_zero(self):
        f = StabilizerFrame.from_state(StabilizerMatrix.zero_state(1))
        frame_apply_gate(f, h(0))
        np.testing.assert_allclose(frame_reconstruct(f).amplitudes, [SQRT_HALF, SQRT_HALF], atol=1e-12)
        assert abs(f.amplitudes[0] - 1) < 1e-12

    def test_global_phase_tracked(self):
        # |1> under P picks up i; the member itself stays |1>
        f = StabilizerFrame.from_state(stab("-Z"))
        frame_apply_gate(f, p(0))
        assert abs(f.amplitudes[0] - 1j) < 1e-12
        np.testing.assert_allclose(frame_reconstruct(f).amplitudes, [0, 1j], atol=1e-12)

    def test_two_term_phase_state(self):
        theta = np.pi / 7
        f = StabilizerFrame(
            stab("ZI", "IZ"), [[1, 1], [-1, -1]], [SQRT_HALF, cmath.exp(1j * theta) * SQRT_HALF]
        )
        flip_both = Circuit(2, [h(0), p(0), p(0), h(0), h(1), p(1), p(1), h(1)])
        dense = frame_reconstruct(f)
        frame_apply_circuit(f, flip_both)
        apply_dense_circuit(dense, flip_both)
        assert np.linalg.norm(frame_reconstruct(f).amplitudes - dense.amplitudes) <= 1e-10

    def test_random_circuits_match_dense(self, random_frame, random_circuit, rng):
        for _ in range(100):
            n = int(rng.integers(1, 5))
            k = int(rng.integers(1, min(4, 2 ** n) + 1))
            f = random_frame(n, k)
            dense = frame_reconstruct(f)
            circuit = random_circuit(n, depth=30, kinds=("h", "p", "cnot", "cz"))
            apply_circuit(f, circuit)
            apply_dense_circuit(dense, circuit)
            got = frame_reconstruct(f)
            assert np.linalg.norm(got.amplitudes - dense.amplitudes) <= 1e-9
            assert abs(abs(dense_inner_product(got, dense)) - 1.0) <= 1e-9

    def test_measurement_unsupported(self):
        f = StabilizerFrame.from_state(StabilizerMatrix.zero_state(2))
        with pytest.raises(UnsupportedOperationError):
            frame_apply_gate(f, measure(0))

    def test_circuit_width(self):
        f = StabilizerFrame.from_state(StabilizerMatrix.zero_state(2))
        with pytest.raises(DimensionError):
            frame_apply_circuit(f, Circuit(3, [h(2)]))


class TestReconstruct:
    def test_zero(self):
        f = StabilizerFrame.from_state(StabilizerMatrix.zero_state(3))
        expected = np.zeros(8)
        expected[0] = 1
        np.testing.assert_allclose(frame_reconstruct(f).amplitudes, expected, atol=1e-12)

    def test_ghz_from_two_basis_states(self):
        n = 4
        f = StabilizerFrame(StabilizerMatrix.zero_state(n), [[1] * n, [-1] * n], [SQRT_HALF, SQRT_HALF])
        np.testing.assert_allclose(
            frame_reconstruct(f).amplitudes, matrix_to_state(ghz_state(n)).amplitudes, atol=1e-12
        )

    def test_unit_norm(self, random_frame):
        for n in range(1, 5):
            f = random_frame(n, min(3, 2 ** n))
            assert abs(frame_reconstruct(f).norm() - 1.0) <= 1e-10

    def test_replayed_signs_describe_same_members(self, random_frame):
        f = random_frame(4, 5)
        reduced = f.matrix.copy()
        log = reduced.canonicalize()
        replayed = replay_signs(log, f.sign_bits)
        for i in range(f.k):
            installed = reduced.unsigned()
            for row, bit in enumerate(replayed[i]):
                if bit:
                    installed.set_row(row, -installed.row(row))
            np.testing.assert_allclose(
                matrix_to_state(installed).amplitudes,
                matrix_to_state(f.member(i)).amplitudes,
                atol=1e-12,
            )


class TestInnerProduct:
    def test_single_state_with_itself(self, random_state):
        f = StabilizerFrame.from_state(random_state(4))
        assert frame_inner_product(f, f.copy()) == 1.0

    def test_phase_superposition_against_zero(self):
        for theta in (0.0, np.pi / 7, 2.0, np.pi):
            f = StabilizerFrame(
                stab("ZI", "IZ"), [[1, 1], [-1, -1]], [SQRT_HALF, cmath.exp(1j * theta) * SQRT_HALF]
            )
            g = StabilizerFrame.from_state(StabilizerMatrix.zero_state(2))
            assert frame_inner_product(f, g) == pytest.approx(SQRT_HALF, abs=1e-12)

    def test_single_members_agree_with_metric(self, random_state, rng):
        for _ in range(200):
            n = int(rng.integers(1, 6))
            a, b = random_state(n), random_state(n)
            if rng.integers(2):
                row = int(rng.integers(n))
                b = a.copy()
                b.set_row(row, -b.row(row))
            value = frame_inner_product(StabilizerFrame.from_state(a), StabilizerFrame.from_state(b))
            assert value == inner_product(a, b).magnitude

    def test_member_overlap(self, random_frame, rng):
        for _ in range(30):
            n = int(rng.integers(1, 5))
            f = random_frame(n, min(3, 2 ** n))
            i = int(rng.integers(f.k))
            g = StabilizerFrame.from_state(f.member(i))
            expected = abs(dense_inner_product(matrix_to_state(f.member(i)), frame_reconstruct(f)))
            assert frame_inner_product(f, g) == pytest.approx(expected, abs=1e-9)
            assert frame_inner_product(f, g) == pytest.approx(abs(f.amplitudes[i]), abs=1e-12)

    def test_inputs_untouched(self, random_frame):
        f, g = random_frame(3, 2), random_frame(3, 3)
        f_vectors, g_vectors = f.phase_vectors.copy(), g.phase_vectors.copy()
        f_rows = f.matrix.copy()
        frame_inner_product(f, g)
        assert np.array_equal(f.phase_vectors, f_vectors)
        assert np.array_equal(g.phase_vectors, g_vectors)
        assert f.matrix == f_rows

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            frame_inner_product(
                StabilizerFrame.from_state(StabilizerMatrix.zero_state(1)),
                StabilizerFrame.from_state(StabilizerMatrix.zero_state(2)),
            )


class TestFrameFormat:
    def test_round_trip(self, random_frame):
        f = random_frame(3, 3)
        again = parse_frame(format_frame(f))
        assert again.matrix == f.matrix
        assert np.array_equal(again.phase_vectors, f.phase_vectors)
        assert np.array_equal(again.amplitudes, f.amplitudes)
        assert format_frame(again) == format_frame(f)

    def test_text(self):
        f = StabilizerFrame(stab("ZI", "IZ"), [[1, 1], [-1, -1]], [0.5, 0.25j])
        assert format_frame(f) == "2\nZI\nIZ\n2\n++ 0.5 0.0\n-- 0.0 0.25\n"

    def test_files(self, tmp_path, random_frame):
        f = random_frame(2, 2)
        path = tmp_path / "state.frame"
        write_frame(path, f)
        assert np.array_equal(read_frame(path).amplitudes, f.amplitudes)

    @pytest.mark.parametrize(
        "text,line",
        [
            ("2\nZI\nIQ\n1\n++ 1 0\n", 3),
            ("2\nZI\nIZ\n2\n++ 1 0\n", 4),
            ("2\nZI\nIZ\n1\n+ 1 0\n", 5),
            ("2\nZI\nIZ\n1\n++ one 0\n", 5),
            ("x\n", 1),
        ],
    )
    def test_parse_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_frame(text)
        assert info.value.line == line

    def test_invalid_layout(self):
        with pytest.raises(InvariantError):
            parse_frame("2\nXI\nZI\n1\n++ 1 0\n")
