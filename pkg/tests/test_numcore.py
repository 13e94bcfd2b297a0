import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from heatlab.numcore import (DensityMatrixError, HermiticityError, PositivityError,
                             check_density, check_hermitian, evolve_rk4, expectation,
                             hermitian_eig, operator_norm, pure_state)
from heatlab.operators import SIGMA, collective_j, dicke_state, m_body_noise

from .helpers import random_density, random_hermitian, random_unitary


class TestValidation:
    def test_non_hermitian_rejected(self):
        with pytest.raises(HermiticityError):
            check_hermitian(np.array([[0, 1], [0, 0]]))

    def test_non_square_rejected(self):
        with pytest.raises(HermiticityError):
            check_hermitian(np.zeros((2, 3)))

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            check_hermitian(np.array([[np.nan, 0], [0, 1]]))

    def test_density_trace(self):
        with pytest.raises(DensityMatrixError):
            check_density(np.eye(2))

    def test_density_positivity(self):
        with pytest.raises(DensityMatrixError):
            check_density(np.diag([1.1, -0.1]))
        check_density(np.diag([1 + 5e-9, -5e-9]))


class TestHermitianEig:
    def test_sigma_z(self):
        assert_allclose(hermitian_eig(SIGMA['z']).eigenvalues, [-1, 1])

    def test_collective_jz(self):
        assert_allclose(hermitian_eig(collective_j('z', 2)).eigenvalues, [-1, 0, 0, 1])

    def test_degenerate_levels(self):
        b = hermitian_eig(collective_j('z', 2))
        assert_array_equal(b.levels, [0, 1, 1, 2])
        assert_allclose(b.level_energies, [-1, 0, 1])

    def test_reconstruction_8x8(self, rng):
        H = random_hermitian(rng, 8)
        b = hermitian_eig(H)
        U = b.eigenvectors
        assert_allclose(U @ np.diag(b.eigenvalues) @ U.conj().T, H, atol=1e-9)
        assert_allclose(U.conj().T @ U, np.eye(8), atol=1e-10)

    def test_reconstruction_1024(self, rng):
        H = random_hermitian(rng, 1024, real=True)
        b = hermitian_eig(H)
        U = b.eigenvectors
        err = np.max(np.abs((U * b.eigenvalues) @ U.T - H))
        assert err <= 1e-9 * max(1, np.max(np.abs(H)))

    def test_deterministic(self, rng):
        H = random_hermitian(rng, 6)
        a, b = hermitian_eig(H), hermitian_eig(H.copy())
        assert_array_equal(a.eigenvalues, b.eigenvalues)
        assert_array_equal(a.eigenvectors, b.eigenvectors)

    def test_phase_convention(self, rng):
        U = hermitian_eig(random_hermitian(rng, 5)).eigenvectors
        cols = np.arange(5)
        lead = U[np.argmax(np.abs(U), axis=0), cols]
        assert_allclose(lead.imag, 0, atol=1e-15)
        assert np.all(lead.real > 0)

    def test_real_input_gives_real_vectors(self, rng):
        assert np.isrealobj(hermitian_eig(random_hermitian(rng, 4, real=True)).eigenvectors)

    def test_projectors_resolve_identity(self):
        b = hermitian_eig(collective_j('z', 3))
        total = sum(b.projector(k) for k in range(len(b.level_energies)))
        assert_allclose(total, np.eye(8), atol=1e-12)


class TestOperatorNorm:
    @pytest.mark.parametrize("d", [1, 3, 7])
    def test_identity(self, d):
        assert operator_norm(np.eye(d)) == pytest.approx(1.0)

    def test_collective_x(self):
        assert operator_norm(2 * 0.5 * collective_j('x', 4)) == pytest.approx(2.0, rel=1e-12)

    def test_m_body(self):
        assert operator_norm(m_body_noise(3, 3, 1.0)) == pytest.approx(3.0, rel=1e-12)

    def test_matches_singular_value(self, rng):
        M = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
        assert operator_norm(M) == pytest.approx(np.linalg.svd(M, compute_uv=False)[0])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            operator_norm(np.zeros((0, 0)))

    @given(st.integers(1, 8), st.integers(0, 2 ** 31))
    def test_submultiplicative(self, d, seed):
        rng = np.random.default_rng(seed)
        A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        B = rng.normal(size=(d, d))
        assert operator_norm(A @ B) <= operator_norm(A) * operator_norm(B) + 1e-9

    @given(st.integers(1, 8), st.integers(0, 2 ** 31))
    def test_unitary_invariance(self, d, seed):
        rng = np.random.default_rng(seed)
        A = random_hermitian(rng, d)
        U = hermitian_eig(random_hermitian(rng, d)).eigenvectors
        assert abs(operator_norm(U @ A @ U.conj().T) - operator_norm(A)) <= 1e-9


class TestExpectation:
    def test_identity(self, rng):
        assert expectation(np.eye(3), random_density(rng, 3)) == pytest.approx(1.0)

    def test_dicke_top(self):
        rho = pure_state(dicke_state(4, 2))
        assert expectation(collective_j('z', 4), rho) == pytest.approx(2.0)

    @pytest.mark.parametrize("L", [1, 2, 5])
    def test_maximally_mixed(self, L):
        d = 2 ** L
        assert expectation(collective_j('z', L), np.eye(d) / d) == pytest.approx(0.0, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expectation(np.eye(2), np.eye(3) / 3)

    def test_imaginary_part_rejected(self):
        with pytest.raises(ValueError):
            expectation(np.array([[0, 1], [0, 0]]), np.array([[0.5, 0], [1j, 0.5]]))


def amplitude_damping(gamma):
    def f(t, rho):
        p, c = rho[0, 0], rho[0, 1]
        return np.array([[-gamma * p, -0.5 * gamma * c],
                         [-0.5 * gamma * np.conj(c), gamma * p]])
    return f


class TestEvolveRK4:
    def test_zero_derivative(self, rng):
        rho0 = random_density(rng, 3)
        traj = evolve_rk4(lambda t, r: np.zeros_like(r), rho0, 0.1, 1.0)
        for _, rho in traj:
            assert_array_equal(rho, rho0)

    def test_includes_endpoints(self):
        traj = evolve_rk4(amplitude_damping(1.0), np.diag([1.0, 0.0]), 0.3, 1.0)
        assert traj.times[0] == 0.0
        assert traj.times[-1] == pytest.approx(1.0, abs=1e-15)

    def test_amplitude_damping(self):
        traj = evolve_rk4(amplitude_damping(1.0), np.diag([1.0, 0.0]), 1e-4, 1.0,
                          save_every=1000)
        assert abs(traj.final[0, 0] - np.exp(-1.0)) <= 1e-8

    def test_order(self):
        errs = []
        for dt in (0.1, 0.05):
            rho = evolve_rk4(amplitude_damping(1.0), np.diag([1.0, 0.0]), dt, 1.0).final
            errs.append(abs(rho[0, 0] - np.exp(-1.0)))
        assert errs[0] / errs[1] >= 12

    def test_unitary_keeps_energy_populations(self, rng):
        H = np.diag([0.0, 1.0, 2.5])
        rho0 = random_density(rng, 3)
        f = lambda t, r: -1j * (H @ r - r @ H)
        traj = evolve_rk4(f, rho0, 1e-3, 2.0, save_every=100)
        for _, rho in traj:
            assert_allclose(np.diag(rho).real, np.diag(rho0).real, atol=1e-10)

    def test_positivity_violation_reports_time(self):
        # a trace-preserving but non-positive generator: drives population below zero
        f = lambda t, r: np.array([[-1.0, 0], [0, 1.0]])
        with pytest.raises(PositivityError) as info:
            evolve_rk4(f, np.diag([0.5, 0.5]), 0.1, 2.0)
        assert info.value.time == pytest.approx(0.6)
        assert info.value.min_eigenvalue < -1e-8

    def test_rejects_trace_breaking_derivative(self):
        with pytest.raises(ValueError, match="trace"):
            evolve_rk4(lambda t, r: -r, np.diag([1.0, 0.0]), 0.1, 1.0)

    def test_bad_step(self):
        with pytest.raises(ValueError):
            evolve_rk4(amplitude_damping(1.0), np.diag([1.0, 0.0]), 0.0, 1.0)

    def test_random_unitary_helper(self, rng):
        U = random_unitary(rng, 4)
        assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-12)
