import numpy as np
import pytest

from hhlsim.errors import NotHermitian, NotPowerOfTwo
from hhlsim.hamsim import (
    EvolutionSpec,
    controlled_power_unitary,
    evolution_unitary,
    pauli_decompose,
    reconstruction_error,
)
from hhlsim.numerics import matrix_exp_hermitian
from hhlsim.problems import make_instance

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def random_hermitian(rng, n=4, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = 0.5 * (g + g.conj().T)
    return scale * h / np.linalg.norm(h, 2)


class TestPauliDecompose:
    def test_single_x(self):
        terms = pauli_decompose(X)
        assert [(t.label, t.coefficient) for t in terms] == [("X", 1.0)]

    def test_identity_4(self):
        terms = pauli_decompose(np.eye(4))
        assert [(t.label, t.coefficient) for t in terms] == [("II", 1.0)]

    def test_reconstruction_of_benchmark_matrix(self):
        inst = make_instance(10, 1, seed=6)
        terms = pauli_decompose(inst.A)
        assert reconstruction_error(inst.A, terms) <= 1e-12

    def test_coefficients_real_for_hermitian(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            a = random_hermitian(rng)
            for term in pauli_decompose(a):
                assert isinstance(term.coefficient, float)
            # coefficient imaginary parts vanish: rebuild with the trace formula
            for term in pauli_decompose(a):
                raw = np.trace(term.matrix() @ a) / 4
                assert abs(raw.imag) <= 1e-14

    def test_rejects_non_power_of_two(self):
        with pytest.raises(NotPowerOfTwo):
            pauli_decompose(np.eye(3))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            pauli_decompose(np.array([[0, 1], [0, 0]], dtype=complex))


class TestEvolutionUnitary:
    def test_zero_time_is_identity_both_modes(self):
        rng = np.random.default_rng(42)
        a = random_hermitian(rng)
        for mode in ("exact", "trotter"):
            u = evolution_unitary(a, EvolutionSpec(t=0.0, slices=3, mode=mode))
            np.testing.assert_allclose(u, np.eye(4), atol=1e-12)

    def test_commuting_terms_make_trotter_exact(self):
        d = np.diag([0.9, 0.4, 0.2, 0.1])
        for r in (1, 2, 5):
            exact = evolution_unitary(d, EvolutionSpec(t=1.3, mode="exact"))
            trot = evolution_unitary(d, EvolutionSpec(t=1.3, slices=r, mode="trotter"))
            np.testing.assert_allclose(trot, exact, atol=1e-12)

    def test_first_order_error_halves_with_doubled_slices(self):
        # oracle: the exact exponential; error should scale ~ 1/r
        a = X + Z
        exact = matrix_exp_hermitian(a, 1.0)
        errors = []
        for r in (1, 2, 4, 8, 16, 32):
            trot = evolution_unitary(a, EvolutionSpec(t=1.0, slices=r, mode="trotter"))
            errors.append(np.linalg.norm(trot - exact, 2))
        ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]
        assert all(1.7 <= r <= 2.3 for r in ratios), ratios

    def test_error_constant_stable_over_slice_range(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            a = random_hermitian(rng, scale=1.0)
            t = 1.0
            exact = matrix_exp_hermitian(a, t)
            consts = []
            for r in (2, 4, 8, 16, 32, 64):
                err = np.linalg.norm(
                    evolution_unitary(a, EvolutionSpec(t=t, slices=r, mode="trotter")) - exact, 2
                )
                consts.append(err * r / t**2)
            if max(consts) < 1e-12:  # effectively commuting draw
                continue
            assert max(consts) / min(consts) <= 2.5, consts

    def test_unitarity(self):
        rng = np.random.default_rng(44)
        a = random_hermitian(rng)
        for mode, r in (("exact", 1), ("trotter", 1), ("trotter", 7)):
            u = evolution_unitary(a, EvolutionSpec(t=2.1, slices=r, mode=mode))
            assert np.max(np.abs(u.conj().T @ u - np.eye(4))) <= 1e-10


class TestControlledPowerUnitary:
    def test_power_zero_equals_base_unitary(self):
        rng = np.random.default_rng(45)
        a = random_hermitian(rng)
        for mode in ("exact", "trotter"):
            spec = EvolutionSpec(t=0.8, slices=4, mode=mode)
            np.testing.assert_allclose(
                controlled_power_unitary(a, spec, 0), evolution_unitary(a, spec), atol=1e-12
            )

    def test_exact_power_is_square(self):
        rng = np.random.default_rng(46)
        a = random_hermitian(rng)
        spec = EvolutionSpec(t=0.8, mode="exact")
        u = evolution_unitary(a, spec)
        np.testing.assert_allclose(controlled_power_unitary(a, spec, 1), u @ u, atol=1e-12)

    def test_trotter_power_matches_repeated_multiplication(self):
        spec = EvolutionSpec(t=0.9, slices=3, mode="trotter")
        a = X + Z
        u = evolution_unitary(a, spec)
        expected = u @ u @ u @ u
        np.testing.assert_allclose(controlled_power_unitary(a, spec, 2), expected, atol=1e-12)

    def test_negative_power_rejected(self):
        with pytest.raises(ValueError):
            controlled_power_unitary(X, EvolutionSpec(t=1.0), -1)


class TestEvolutionSpecValidation:
    def test_bad_slices(self):
        with pytest.raises(ValueError):
            EvolutionSpec(t=1.0, slices=0)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            EvolutionSpec(t=1.0, mode="magic")
