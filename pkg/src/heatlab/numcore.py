"""
Dense linear algebra and fixed-step time integration.

Operators are plain ``numpy.ndarray`` objects. The ``check_*`` helpers
validate the invariants of Hermitian operators and density matrices and
return the (possibly copied) array, so they can be used inline::

    rho = check_density(rho)
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

DEFAULT_POSITIVITY_TOL = 1e-8


class HermiticityError(ValueError):
    pass


class DensityMatrixError(ValueError):
    pass


class PositivityError(RuntimeError):
    """Raised when an evolved state acquires a negative eigenvalue."""

    def __init__(self, time, min_eigenvalue, tolerance):
        self.time = time
        self.min_eigenvalue = min_eigenvalue
        self.tolerance = tolerance
        super().__init__(
            f"state lost positivity at t={time:.6g}: min eigenvalue "
            f"{min_eigenvalue:.3e} < -{tolerance:.1e}")


def _max_abs(M):
    return float(np.max(np.abs(M))) if M.size else 0.0


def check_matrix(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.size == 0:
        raise ValueError(f"expected a non-empty 2-d array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def check_hermitian(M, rtol=1e-12):
    """Validate ``M`` as a Hermitian operator and return it."""
    M = check_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise HermiticityError(f"operator must be square, got {M.shape}")
    scale = max(1.0, _max_abs(M))
    err = _max_abs(M - M.conj().T)
    if err > rtol * scale:
        raise HermiticityError(
            f"operator is not Hermitian (max |M - M^dag| = {err:.3e})")
    return M


def check_density(rho, positivity_tol=DEFAULT_POSITIVITY_TOL, hermitian_rtol=1e-10):
    """Validate ``rho`` as a density matrix and return it.

    Requires unit trace (real part within 1e-10, imaginary part below 1e-12)
    and a minimum eigenvalue no smaller than ``-positivity_tol``.
    """
    rho = check_hermitian(rho, rtol=hermitian_rtol)
    tr = np.trace(rho)
    if abs(tr.real - 1.0) > 1e-10 or abs(tr.imag) > 1e-12:
        raise DensityMatrixError(f"trace of density matrix is {tr}")
    lam = np.linalg.eigvalsh(rho)[0]
    if lam < -positivity_tol:
        raise DensityMatrixError(
            f"density matrix has eigenvalue {lam:.3e} < -{positivity_tol:.1e}")
    return rho


def pure_state(psi):
    """Projector |psi><psi| for a (normalised here) state vector."""
    psi = np.asarray(psi)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def commutator(A, B):
    return A @ B - B @ A


@dataclass(frozen=True)
class EnergyBasis:
    """Eigendecomposition ``H = U diag(E) U^dag`` with ascending ``E``.

    ``levels[i]`` is the index of the energy level (cluster of eigenvalues
    closer than ``degeneracy_tolerance``) that eigenvector ``i`` belongs to;
    ``level_energies`` holds the mean energy of each cluster.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_tolerance: float
    levels: np.ndarray = field(repr=False)
    level_energies: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def to_energy_basis(self, M):
        U = self.eigenvectors
        return U.conj().T @ M @ U

    def from_energy_basis(self, M):
        U = self.eigenvectors
        return U @ M @ U.conj().T

    def projector(self, level):
        cols = self.eigenvectors[:, self.levels == level]
        return cols @ cols.conj().T


def _cluster(values, tol):
    """Group ascending ``values`` into runs whose consecutive gaps are <= tol."""
    labels = np.zeros(len(values), dtype=int)
    if len(values) > 1:
        labels[1:] = np.cumsum(np.diff(values) > tol)
    centers = np.array([values[labels == k].mean() for k in range(labels[-1] + 1)]) \
        if len(values) else np.empty(0)
    return labels, centers


def hermitian_eig(H, degeneracy_tolerance=1e-9):
    """Deterministic eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned in ascending order. The phase of each
    eigenvector is fixed by making its largest-magnitude component (first
    one on ties) real and positive. ``degeneracy_tolerance`` is relative to
    ``max(1, ||H||_max)``.
    """
    H = check_hermitian(H)
    E, U = np.linalg.eigh(H)
    idx = np.argmax(np.abs(U), axis=0)
    phases = U[idx, np.arange(U.shape[1])]
    phases = phases / np.abs(phases)
    U = U * phases.conj()
    if np.isrealobj(H):
        U = U.real
    tol = degeneracy_tolerance * max(1.0, _max_abs(H))
    levels, centers = _cluster(E, tol)
    return EnergyBasis(E, U, tol, levels, centers)


def operator_norm(M):
    """Operator norm induced by the Euclidean vector norm (largest singular value)."""
    M = check_matrix(M)
    if M.shape[0] == M.shape[1] and _max_abs(M - M.conj().T) <= 1e-13 * max(1.0, _max_abs(M)):
        return float(np.max(np.abs(np.linalg.eigvalsh(M))))
    return float(np.linalg.norm(M, 2))


def expectation(H, rho):
    """Real expectation value ``Tr(H rho)``."""
    H = np.asarray(H)
    rho = np.asarray(rho)
    if H.shape != rho.shape:
        raise ValueError(f"dimension mismatch: {H.shape} vs {rho.shape}")
    val = np.einsum('ij,ji->', H, rho)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"Tr(H rho) has imaginary part {val.imag:.3e}")
    return float(val.real)


def rk4_steps(f, y0, dt, n_steps, t0=0.0, save_every=1, callback=None):
    """Classical fixed-step RK4 for ``dy/dt = f(t, y)``.

    Returns ``(times, states)`` including the initial point and the final
    point. ``callback(t, y)`` is called on every stored state.
    """
    y = np.array(y0, copy=True)
    t = t0
    times = [t]
    states = [y.copy()]
    if callback is not None:
        callback(t, y)
    for i in range(1, n_steps + 1):
        k1 = f(t, y)
        k2 = f(t + dt / 2, y + dt / 2 * k1)
        k3 = f(t + dt / 2, y + dt / 2 * k2)
        k4 = f(t + dt, y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + i * dt
        if i % save_every == 0 or i == n_steps:
            times.append(t)
            states.append(y.copy())
            if callback is not None:
                callback(t, y)
    return np.array(times), states


@dataclass
class Trajectory:
    times: np.ndarray
    states: List[np.ndarray]

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        return iter(zip(self.times, self.states))

    @property
    def final(self):
        return self.states[-1]


def _probe_derivative(derivative, rho0, rng):
    d = rho0.shape[0]
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    probe = X @ X.conj().T
    probe /= np.trace(probe).real
    for rho in (rho0, probe):
        drho = np.asarray(derivative(0.0, rho))
        scale = max(1.0, _max_abs(drho))
        if abs(np.trace(drho)) > 1e-9 * scale:
            raise ValueError("derivative does not preserve the trace")
        if _max_abs(drho - drho.conj().T) > 1e-9 * scale:
            raise ValueError("derivative does not preserve Hermiticity")


def n_steps_for(dt, t_final):
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_final < 0:
        raise ValueError("t_final must be nonnegative")
    return int(np.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0


def evolve_rk4(derivative: Callable, rho0, dt, t_final,
               positivity_tol=DEFAULT_POSITIVITY_TOL, save_every=1,
               seed: Optional[int] = 0):
    """Integrate ``drho/dt = derivative(t, rho)`` with fixed-step RK4.

    The step is shrunk uniformly so that ``t_final`` is hit exactly. Every
    stored state is re-validated as a density matrix; a negative eigenvalue
    below ``-positivity_tol`` raises :class:`PositivityError` carrying the
    offending time. States are never clamped.
    """
    rho0 = check_density(rho0, positivity_tol)
    n = n_steps_for(dt, t_final)
    h = t_final / n if n else dt
    if seed is not None:
        _probe_derivative(derivative, rho0, np.random.default_rng(seed))
    dtype = np.result_type(rho0, np.asarray(derivative(0.0, rho0)))

    def validate(t, rho):
        if _max_abs(rho - rho.conj().T) > 1e-10:
            raise DensityMatrixError(f"state lost Hermiticity at t={t:.6g}")
        tr = np.trace(rho)
        if abs(tr.real - 1) > 1e-10 or abs(tr.imag) > 1e-12:
            raise DensityMatrixError(f"trace drifted to {tr} at t={t:.6g}")
        lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
        if lam < -positivity_tol:
            raise PositivityError(t, lam, positivity_tol)

    times, states = rk4_steps(derivative, rho0.astype(dtype), h, n,
                              save_every=save_every, callback=validate)
    return Trajectory(times, states)
