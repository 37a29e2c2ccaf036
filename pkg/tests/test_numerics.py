import numpy as np
import pytest

from hhlsim.errors import DimensionMismatch, NotHermitian, Singular
from hhlsim.numerics import (
    condition_number,
    inner,
    jacobi_eigh,
    matrix_exp_hermitian,
    norm2,
    relative_error,
    residual,
    solve_exact,
)
from hhlsim.problems import make_instance


def random_hermitian(rng, n=4):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


class TestJacobiEigh:
    def test_identity(self):
        eig = jacobi_eigh(np.eye(4))
        np.testing.assert_allclose(eig.eigenvalues, np.ones(4))
        np.testing.assert_allclose(eig.eigenvectors, np.eye(4))

    def test_diagonal_sorted_ascending(self):
        eig = jacobi_eigh(np.diag([1.0, 0.5, 0.1, 0.1]))
        np.testing.assert_allclose(eig.eigenvalues, [0.1, 0.1, 0.5, 1.0])

    def test_benchmark_kappa100_spectrum(self):
        inst = make_instance(100, 1, seed=3)
        eig = jacobi_eigh(inst.A)
        np.testing.assert_allclose(eig.eigenvalues, [0.01, 0.1, 0.5, 1.0], atol=1e-10)

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            a = random_hermitian(rng)
            eig = jacobi_eigh(a)
            scale = np.linalg.norm(a)
            assert np.max(np.abs(eig.reconstruct() - a)) <= 1e-10 * scale
            v = eig.eigenvectors
            assert np.max(np.abs(v.conj().T @ v - np.eye(4))) <= 1e-10

    def test_eigenpair_residuals(self):
        rng = np.random.default_rng(12)
        a = random_hermitian(rng, n=8)
        eig = jacobi_eigh(a)
        scale = np.linalg.norm(a)
        for lam, vec in zip(eig.eigenvalues, eig.eigenvectors.T):
            assert np.linalg.norm(a @ vec - lam * vec) <= 1e-10 * scale

    def test_degenerate_eigenvectors_orthonormal(self):
        inst = make_instance(10, 1, seed=5)  # repeated eigenvalue 0.1
        eig = jacobi_eigh(inst.A)
        v = eig.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(4))) <= 1e-10

    def test_larger_matrix(self):
        rng = np.random.default_rng(13)
        a = random_hermitian(rng, n=16)
        eig = jacobi_eigh(a)
        np.testing.assert_allclose(
            sorted(eig.eigenvalues), np.linalg.eigvalsh(a), atol=1e-9 * np.linalg.norm(a)
        )

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestConditionNumber:
    def test_identity_is_one(self):
        assert condition_number(np.eye(4)) == pytest.approx(1.0)

    def test_benchmark_kappa10(self):
        inst = make_instance(10, 1, seed=1)
        assert condition_number(inst.A) == pytest.approx(10.0, abs=1e-9)

    def test_benchmark_kappa100(self):
        inst = make_instance(100, 2, seed=1)
        assert condition_number(inst.A) == pytest.approx(100.0, abs=1e-8)

    def test_singular_raises(self):
        with pytest.raises(Singular):
            condition_number(np.diag([1.0, 0.0]))

    def test_scaling_invariance(self):
        rng = np.random.default_rng(7)
        a = random_hermitian(rng)
        base = condition_number(a)
        for c in (2.0, -3.5, 0.001):
            assert condition_number(c * a) == pytest.approx(base, rel=1e-10)


class TestSolveExact:
    def test_identity(self):
        b = np.array([1.0, 2.0, 3.0, 4.0])
        np.testing.assert_allclose(solve_exact(np.eye(4), b), b)

    def test_benchmark_solution_recovery(self):
        inst = make_instance(10, 1, seed=1)
        x = solve_exact(inst.A, inst.b)
        assert np.max(np.abs(x - inst.x_true)) <= 1e-10

    def test_residual_oracle_on_random_instances(self):
        # independent check: substitute the solution back into the system
        rng = np.random.default_rng(21)
        for _ in range(100):
            a = random_hermitian(rng)
            a += 4 * np.eye(4)  # keep condition numbers modest (<= ~100)
            b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            x = solve_exact(a, b)
            assert np.linalg.norm(b - a @ x) <= 1e-12 * np.linalg.norm(b)

    def test_singular_raises(self):
        with pytest.raises(Singular):
            solve_exact(np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 0.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            solve_exact(np.eye(3), np.ones(4))


class TestMatrixExp:
    def test_zero_matrix_gives_identity(self):
        np.testing.assert_allclose(matrix_exp_hermitian(np.zeros((4, 4)), 2.7), np.eye(4))

    def test_diagonal_case(self):
        t = np.pi
        d = np.array([1.0, 0.5, 0.1, 0.1])
        u = matrix_exp_hermitian(np.diag(d), t)
        np.testing.assert_allclose(u, np.diag(np.exp(1j * d * t)), atol=1e-12)

    def test_against_taylor_series(self):
        # oracle: truncated Taylor expansion of exp(iAt)
        rng = np.random.default_rng(31)
        a = random_hermitian(rng)
        t = 0.3
        term = np.eye(4, dtype=complex)
        total = np.eye(4, dtype=complex)
        for k in range(1, 41):
            term = term @ (1j * t * a) / k
            total += term
        np.testing.assert_allclose(matrix_exp_hermitian(a, t), total, atol=1e-10)

    def test_unitary_and_inverse(self):
        rng = np.random.default_rng(32)
        for _ in range(100):
            a = random_hermitian(rng)
            t = rng.uniform(0, 2 * np.pi)
            u = matrix_exp_hermitian(a, t)
            v = matrix_exp_hermitian(a, -t)
            assert np.max(np.abs(u @ v - np.eye(4))) <= 1e-10
            assert np.max(np.abs(u.conj().T @ u - np.eye(4))) <= 1e-10


class TestVectorOps:
    def test_residual_identity(self):
        b = np.array([1.0, 2.0, 3.0, 4.0])
        np.testing.assert_allclose(residual(np.eye(4), b, b), np.zeros(4))

    def test_residual_on_benchmark(self):
        inst = make_instance(10, 1, seed=1)
        r = residual(inst.A, inst.x_true, inst.b)
        assert np.linalg.norm(r) <= 1e-12 * np.linalg.norm(inst.b)

    def test_relative_error_zero_for_equal(self):
        x = np.array([1.0, 2.0])
        assert relative_error(x, x) == 0.0

    def test_inner_conjugates_first_argument(self):
        u = np.array([1j, 0.0])
        v = np.array([1.0, 0.0])
        assert inner(u, v) == pytest.approx(-1j)

    def test_norm2(self):
        assert norm2(np.array([3.0, 4.0])) == pytest.approx(5.0)

    def test_dimension_mismatches(self):
        with pytest.raises(DimensionMismatch):
            residual(np.eye(2), np.ones(3), np.ones(2))
        with pytest.raises(DimensionMismatch):
            inner(np.ones(2), np.ones(3))
        with pytest.raises(DimensionMismatch):
            relative_error(np.ones(2), np.ones(3))
