import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import ket_bra, random_hermitian, random_matrix, two_qubit
from core.errors import ConvergenceError, ShapeError, ValidationError
from core.linalg import (
    ComplexMatrix,
    DimensionSplit,
    Subsystem,
    dagger,
    frobenius_distance,
    hermitian_eigenvalues,
    is_unitary,
    kron,
    matmul,
    partial_trace,
    swap_factors,
)


class TestComplexMatrix:
    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError) as exc:
            ComplexMatrix([[1.0, float("nan")]])
        assert exc.value.checks == ["finite entries"]

    def test_rejects_empty_and_vectors(self):
        with pytest.raises(ShapeError):
            ComplexMatrix([1.0, 2.0])
        with pytest.raises(ShapeError):
            ComplexMatrix(np.zeros((0, 3)))

    def test_is_immutable_copy(self):
        source = np.eye(2, dtype=complex)
        m = ComplexMatrix(source)
        source[0, 0] = 5.0
        assert m[0, 0] == 1.0
        with pytest.raises(ValueError):
            m.data[0, 0] = 3.0

    def test_from_entries_row_major(self):
        m = ComplexMatrix.from_entries(2, 3, [1, 2, 3, 4, 5, 6j])
        assert m.shape == (2, 3)
        assert m[1, 2] == 6j
        assert m.entries[3] == 4
        with pytest.raises(ShapeError):
            ComplexMatrix.from_entries(2, 2, [1, 2, 3])


class TestProducts:
    def test_identity_product(self):
        i2 = ComplexMatrix.identity(2)
        assert matmul(i2, i2) == i2

    def test_matches_triple_loop(self, rng):
        a = random_matrix(rng, 3, 4)
        b = random_matrix(rng, 4, 2)
        expected = np.zeros((3, 2), dtype=complex)
        for i in range(3):
            for j in range(2):
                for k in range(4):
                    expected[i, j] += a[i, k] * b[k, j]
        assert_allclose(matmul(a, b).data, expected, atol=1e-12)

    def test_shape_mismatch(self, rng):
        with pytest.raises(ShapeError):
            matmul(random_matrix(rng, 2, 3), random_matrix(rng, 2, 3))

    def test_demon_steps_compose(self, demon_cycle_matrix):
        measure = two_qubit(0, 0, 0, 0) + two_qubit(0, 0, 1, 1) + two_qubit(1, 1, 0, 1) + two_qubit(1, 1, 1, 0)
        feedback = two_qubit(0, 0, 0, 0) + two_qubit(1, 1, 0, 0) + two_qubit(0, 1, 1, 1) + two_qubit(1, 0, 1, 1)
        assert matmul(feedback, measure) == demon_cycle_matrix

    def test_associativity(self, rng):
        a, b, c = (random_matrix(rng, 3, 3) for _ in range(3))
        assert frobenius_distance((a @ b) @ c, a @ (b @ c)) < 1e-10


class TestDagger:
    def test_basis_flip(self):
        assert dagger(ket_bra(0, 1)) == ket_bra(1, 0)
        assert dagger(ComplexMatrix.identity(2)) == ComplexMatrix.identity(2)

    def test_elementwise(self, rng):
        a = random_matrix(rng, 2, 3)
        d = dagger(a)
        assert d.shape == (3, 2)
        for i in range(2):
            for j in range(3):
                assert d[j, i] == a[i, j].conjugate()
        assert dagger(d) == a


class TestKron:
    def test_identities(self):
        assert kron(ComplexMatrix.identity(2), ComplexMatrix.identity(2)) == ComplexMatrix.identity(4)

    def test_product_of_projectors(self):
        m = kron(ket_bra(0, 0), ket_bra(0, 0))
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        assert_allclose(m.data, expected)

    def test_cold_qubit_with_mixed_partner(self):
        half = 0.5 * (ket_bra(0, 0) + ket_bra(1, 1))
        assert kron(ket_bra(0, 0), half) == ComplexMatrix.diag([0.5, 0.5, 0, 0])

    def test_system_major_index(self):
        split = DimensionSplit(2, 3)
        m = kron(ComplexMatrix.ket_bra(1, 1, 2), ComplexMatrix.ket_bra(2, 2, 3))
        k = split.index(1, 2)
        assert k == 5
        assert m[k, k] == 1.0

    def test_mixed_product_property(self, rng):
        a, b, c, d = (random_matrix(rng, 2, 2) for _ in range(4))
        assert frobenius_distance(kron(a, b) @ kron(c, d), kron(a @ c, b @ d)) < 1e-12


class TestPartialTrace:
    def test_product_state(self, rng):
        rho = random_hermitian(rng, 2)
        pi = random_hermitian(rng, 3)
        split = DimensionSplit(2, 3)
        reduced = partial_trace(kron(rho, pi), split, Subsystem.RESERVOIR)
        assert frobenius_distance(reduced, pi.trace() * rho) < 1e-12
        other = partial_trace(kron(rho, pi), split, Subsystem.SYSTEM)
        assert frobenius_distance(other, rho.trace() * pi) < 1e-12

    def test_reset_state_over_demon(self):
        r3 = kron(ket_bra(0, 0), ComplexMatrix.diag([0.5, 0.5]))
        assert partial_trace(r3, DimensionSplit(2, 2), Subsystem.RESERVOIR) == ket_bra(0, 0)

    def test_correlated_state_over_qubit(self):
        rho_gg, rho_ee = 0.7, 0.3
        r2 = rho_gg * two_qubit(0, 0, 0, 0) + rho_ee * two_qubit(1, 1, 1, 1)
        reduced = partial_trace(r2, DimensionSplit(2, 2), Subsystem.SYSTEM)
        # index summation: out[a, b] = sum_i r2[2i + a, 2i + b]
        expected = np.zeros((2, 2), dtype=complex)
        for a in range(2):
            for b in range(2):
                expected[a, b] = sum(r2[2 * i + a, 2 * i + b] for i in range(2))
        assert_allclose(reduced.data, expected)
        assert_allclose(reduced.data, np.diag([rho_gg, rho_ee]))

    @pytest.mark.parametrize("which", list(Subsystem))
    def test_trace_preserved(self, rng, which):
        m = random_matrix(rng, 6, 6)
        reduced = partial_trace(m, DimensionSplit(3, 2), which)
        assert abs(reduced.trace() - m.trace()) < 1e-12

    def test_indivisible(self, rng):
        with pytest.raises(ShapeError):
            partial_trace(random_matrix(rng, 5, 5), DimensionSplit(2, 2), Subsystem.RESERVOIR)

    def test_swap_factors(self, rng):
        a, b = random_matrix(rng, 2, 2), random_matrix(rng, 3, 3)
        split = DimensionSplit(2, 3)
        swapped = swap_factors(kron(a, b), split)
        assert frobenius_distance(swapped, kron(b, a)) < 1e-14
        assert swap_factors(swapped, split.swapped()) == kron(a, b)


class TestEigensolver:
    def test_diagonal(self):
        assert hermitian_eigenvalues(ComplexMatrix.diag([0.5, 0.5])).values == (0.5, 0.5)

    def test_pauli_x(self):
        values = hermitian_eigenvalues(ComplexMatrix([[0, 1], [1, 0]])).values
        assert_allclose(values, [-1.0, 1.0], atol=1e-14)

    def test_random_trace_and_reconstruction(self, rng):
        h = random_hermitian(rng, 6)
        eig = hermitian_eigenvalues(h, with_vectors=True)
        assert list(eig.values) == sorted(eig.values)
        assert abs(sum(eig.values) - h.trace().real) < 1e-10
        v = eig.vectors
        rebuilt = v @ ComplexMatrix.diag(eig.values) @ dagger(v)
        assert frobenius_distance(rebuilt, h) < 1e-9
        assert is_unitary(v, 1e-9)

    def test_complex_entries(self):
        # Pauli Y
        eig = hermitian_eigenvalues(ComplexMatrix([[0, -1j], [1j, 0]]), with_vectors=True)
        assert_allclose(eig.values, [-1.0, 1.0], atol=1e-14)
        y = eig.vectors.data
        assert_allclose(np.array([[0, -1j], [1j, 0]]) @ y[:, 0], -y[:, 0], atol=1e-12)

    def test_projector_spectrum(self, rng):
        g = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
        q, _ = np.linalg.qr(g)
        values = hermitian_eigenvalues(ComplexMatrix(q @ q.conj().T)).values
        assert_allclose(values, [0, 0, 0, 1, 1], atol=1e-10)

    def test_degenerate_16(self, rng):
        h = kron(random_hermitian(rng, 4), ComplexMatrix.identity(4))
        eig = hermitian_eigenvalues(h, with_vectors=True)
        rebuilt = eig.vectors @ ComplexMatrix.diag(eig.values) @ dagger(eig.vectors)
        assert frobenius_distance(rebuilt, h) < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError) as exc:
            hermitian_eigenvalues(ComplexMatrix([[0, 1], [0, 0]]))
        assert exc.value.checks == ["hermiticity"]

    def test_sweep_cap(self, rng, monkeypatch):
        from core.config import settings

        monkeypatch.setattr(settings, "JACOBI_MAX_SWEEPS", 1)
        with pytest.raises(ConvergenceError):
            hermitian_eigenvalues(random_hermitian(rng, 8))


class TestNormsAndUnitarity:
    def test_frobenius(self):
        i2 = ComplexMatrix.identity(2)
        assert frobenius_distance(i2, i2) == 0.0
        assert frobenius_distance(i2, ComplexMatrix.zeros(2)) == pytest.approx(math.sqrt(2))
        assert frobenius_distance(i2 + i2, ComplexMatrix.diag([2, 0])) == pytest.approx(2.0)
        with pytest.raises(ShapeError):
            frobenius_distance(i2, ComplexMatrix.identity(3))

    def test_unitary(self, demon_cycle_matrix):
        assert is_unitary(ComplexMatrix.identity(4), 1e-12)
        assert is_unitary(demon_cycle_matrix, 1e-15)

    def test_missing_term_breaks_unitarity(self, demon_cycle_matrix):
        broken = demon_cycle_matrix - two_qubit(1, 1, 0, 1)
        assert not is_unitary(broken, 1e-9)
        gram = dagger(broken) @ broken
        assert frobenius_distance(gram, ComplexMatrix.identity(4)) >= 1.0
