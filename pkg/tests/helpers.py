"""Shared builders for the test suite."""

import numpy as np

from heatlab import spectral
from heatlab.numcore import hermitian_eig


def banded_noise(rng, E, width, real=False):
    """Hermitian operator in the eigenbasis of ``diag(E)`` with ``A_ij = 0`` for ``|E_i - E_j| > width``."""
    d = len(E)
    X = rng.normal(size=(d, d))
    if not real:
        X = X + 1j * rng.normal(size=(d, d))
    A = 0.5 * (X + X.conj().T)
    A[np.abs(E[:, None] - E[None, :]) > width] = 0
    return A


def random_unitary(rng, d):
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(X)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def thermal_system(H, A, gamma0, beta):
    bath = spectral.BathSpec('T', beta, [(A, spectral.flat_thermal(gamma0, beta))])
    return spectral.SystemSpec(H, [bath])


def energy_diagonal_state(rng, H):
    """Random state diagonal in the eigenbasis of ``H``."""
    basis = hermitian_eig(H)
    p = rng.dirichlet(np.ones(basis.dim))
    return basis.from_energy_basis(np.diag(p).astype(basis.eigenvectors.dtype))


def random_density(rng, d, rank=None, real=False):
    rank = rank or d
    X = rng.normal(size=(d, rank))
    if not real:
        X = X + 1j * rng.normal(size=(d, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, d, real=False):
    X = rng.normal(size=(d, d))
    if not real:
        X = X + 1j * rng.normal(size=(d, d))
    return 0.5 * (X + X.conj().T)


def random_bound_case(rng):
    """Random ``(H, bath)`` with dim <= 16 and a noise operator banded in energy."""
    d = int(rng.integers(2, 17))
    E = np.sort(rng.uniform(-2, 2, d))
    U = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))[0]
    H = U @ np.diag(E) @ U.conj().T
    A = U @ banded_noise(rng, E, rng.uniform(0.1, 4.0)) @ U.conj().T
    A = 0.5 * (A + A.conj().T)
    beta = rng.uniform(0, 3)
    gamma0 = rng.uniform(0.1, 2)
    model = spectral.flat_thermal(gamma0, beta)
    return H, spectral.BathSpec('B', beta, [(A, model)])


# criterion number -> list of (part, ok, detail); printed by the terminal summary hook
ACCEPTANCE = {}


def record(criterion, part, ok, detail):
    """Log one acceptance sub-check and echo it."""
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(ok), detail))
    print(f"[criterion {criterion}] {part}: {'PASS' if ok else 'FAIL'} ({detail})")
    return bool(ok)
