"""
Master equations: secular (Bohr-frequency) decomposition, dense Redfield and
GKSL dissipators, time evolution, and the Dicke-ladder rate equations.

Both dissipators drop the Lamb-shift (imaginary) part of the one-sided bath
transform, which cannot carry heat. With ``Gamma(omega) = gamma(omega) / 2``
the Redfield dissipator of a channel with noise operator ``A`` is::

    D[rho] = Lam rho A - A Lam rho + h.c.,   Lam = sum_w Gamma(w) A_w

and the GKSL dissipator is::

    D_G[rho] = sum_w gamma(w) (A_w rho A_w^dag - {A_w^dag A_w, rho} / 2)
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from . import spectral
from .numcore import (DEFAULT_POSITIVITY_TOL, EnergyBasis, Trajectory,
                      check_density, evolve_rk4, hermitian_eig, n_steps_for,
                      rk4_steps)
from .operators import ladder_coefficient, ladder_m_values

log = logging.getLogger(__name__)

ENGINES = ('redfield', 'gksl')


@dataclass
class JumpDecomposition:
    """Bohr-frequency resolution ``A = sum_w A_w`` of one noise operator.

    ``frequencies`` always contains 0 and otherwise only frequencies with a
    nonzero block. ``A_w`` lowers the energy by ``w`` and is materialised on
    demand by :meth:`jump`.
    """
    basis: EnergyBasis
    A_energy: np.ndarray          # noise operator in the energy eigenbasis
    bohr: np.ndarray              # bohr[i, j] = E_j - E_i (level energies)
    frequencies: np.ndarray
    freq_index: np.ndarray        # element -> index into frequencies, -1 if dropped
    frequency_bin_tolerance: float
    warnings: List[str] = field(default_factory=list)

    def mask(self, k):
        return self.freq_index == k

    def jump_energy_basis(self, k):
        return np.where(self.mask(k), self.A_energy, 0)

    def jump(self, k):
        """``A_w`` for ``w = frequencies[k]`` in the original basis."""
        return self.basis.from_energy_basis(self.jump_energy_basis(k))

    @property
    def jumps(self) -> Dict[float, np.ndarray]:
        return {float(w): self.jump(k) for k, w in enumerate(self.frequencies)}

    def index_of(self, omega, atol=None):
        atol = self.frequency_bin_tolerance if atol is None else atol
        hits = np.flatnonzero(np.abs(self.frequencies - omega) <= atol)
        if not len(hits):
            raise KeyError(f"no Bohr frequency near {omega}")
        return int(hits[0])


def secular_decompose(A, basis: EnergyBasis, freq_tol=None):
    """Split ``A`` into Bohr-frequency components with respect to ``basis``.

    Frequencies closer than ``freq_tol`` (default ``1e-9 * max|E|``) are
    merged; a merge of values that differ by more than roundoff is logged and
    recorded in ``warnings``.
    """
    A = np.asarray(A)
    if A.shape != (basis.dim, basis.dim):
        raise ValueError(f"operator shape {A.shape} does not match basis dim {basis.dim}")
    scale = max(1.0, float(np.max(np.abs(basis.eigenvalues))))
    if freq_tol is None:
        freq_tol = 1e-9 * scale
    At = basis.to_energy_basis(A)
    lev = basis.level_energies[basis.levels]
    W = lev[None, :] - lev[:, None]

    uniq = np.unique(W)
    labels = np.zeros(len(uniq), dtype=int)
    labels[1:] = np.cumsum(np.diff(uniq) > freq_tol)
    n_bins = labels[-1] + 1
    centers = np.bincount(labels, weights=uniq) / np.bincount(labels)
    # labels are sorted, so each bin is a contiguous run of uniq
    starts = np.flatnonzero(np.r_[True, np.diff(labels) > 0])
    ends = np.r_[starts[1:], len(uniq)] - 1
    warnings = []
    roundoff = 64 * np.finfo(float).eps * scale
    for lo, hi in zip(uniq[starts], uniq[ends]):
        if hi - lo > roundoff:
            msg = (f"Bohr frequencies in [{lo:.12g}, {hi:.12g}] merged "
                   f"by tolerance {freq_tol:.3g}")
            log.warning(msg)
            warnings.append(msg)
    bin_of = labels[np.searchsorted(uniq, W)]

    amax = float(np.max(np.abs(At))) if At.size else 0.0
    nonzero = np.abs(At) > 1e-12 * amax if amax > 0 else np.zeros(At.shape, bool)
    keep = set(np.unique(bin_of[nonzero]).tolist())
    zero_bin = int(np.argmin(np.abs(centers)))
    if abs(centers[zero_bin]) <= freq_tol:
        centers[zero_bin] = 0.0
        keep.add(zero_bin)
    kept = sorted(keep)
    freqs = [centers[b] for b in kept]
    remap = -np.ones(n_bins, dtype=int)
    remap[kept] = np.arange(len(kept))
    freq_index = remap[bin_of]
    freq_index[~nonzero & (freq_index < 0)] = -1
    if 0.0 not in freqs:
        # only reachable when the Hamiltonian has no zero Bohr frequency (never
        # for a square matrix); kept for completeness
        freqs.append(0.0)
    At = np.where(freq_index >= 0, At, 0)
    return JumpDecomposition(basis, At, W, np.array(freqs), freq_index,
                             float(freq_tol), warnings)


class _Channel:
    def __init__(self, A, model, basis, freq_tol):
        self.A = np.asarray(A)
        self.model = model
        self.decomp = secular_decompose(A, basis, freq_tol)

    def lamb_free_gamma(self):
        """Real part of the one-sided transform, ``gamma(omega) / 2``, per element."""
        return 0.5 * spectral.rate(self.model, self.decomp.bohr)


class MasterEquation:
    """Prepared generator for a :class:`~heatlab.spectral.SystemSpec`.

    Precomputes the eigenbasis and per-channel decompositions so repeated
    dissipator evaluations only cost a few matrix products.
    """

    def __init__(self, system, engine='redfield', freq_tol=None):
        if engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
        self.system = system
        self.engine = engine
        self.H = system.hamiltonian
        self.basis = hermitian_eig(self.H)
        self.channels = [[_Channel(A, m, self.basis, freq_tol) for A, m in bath.channels]
                         for bath in system.baths]
        self._redfield = None
        self._gksl = None

    @property
    def warnings(self):
        return [w for chans in self.channels for c in chans for w in c.decomp.warnings]

    def max_bohr_frequency(self):
        E = self.basis.eigenvalues
        return float(E[-1] - E[0])

    def _redfield_terms(self):
        if self._redfield is None:
            self._redfield = [
                [(c.A, self.basis.from_energy_basis(c.decomp.A_energy * c.lamb_free_gamma()))
                 for c in chans] for chans in self.channels]
        return self._redfield

    def _gksl_terms(self):
        if self._gksl is None:
            terms = []
            for chans in self.channels:
                jumps, K = [], 0
                for c in chans:
                    d = c.decomp
                    rates = spectral.rate(c.model, d.frequencies)
                    for k, g in enumerate(np.atleast_1d(rates)):
                        if g == 0:
                            continue
                        Ak = d.jump_energy_basis(k)
                        if not np.any(Ak):
                            continue
                        jumps.append((float(g), Ak))
                        K = K + g * (Ak.conj().T @ Ak)
                terms.append((jumps, K))
            self._gksl = terms
        return self._gksl

    def redfield_dissipator(self, bath_index, rho):
        out = 0
        for A, Lam in self._redfield_terms()[bath_index]:
            M = Lam @ rho
            X = M @ A - A @ M
            out = out + X + X.conj().T
        return out if not np.isscalar(out) else np.zeros_like(rho)

    def gksl_dissipator(self, bath_index, rho):
        jumps, K = self._gksl_terms()[bath_index]
        if not jumps:
            return np.zeros_like(rho)
        r = self.basis.to_energy_basis(rho)
        out = -0.5 * (K @ r + r @ K)
        for g, Ak in jumps:
            out = out + g * (Ak @ r @ Ak.conj().T)
        return self.basis.from_energy_basis(out)

    def dissipator(self, bath_index, rho):
        if self.engine == 'redfield':
            return self.redfield_dissipator(bath_index, rho)
        return self.gksl_dissipator(bath_index, rho)

    def dissipators(self, rho):
        return [self.dissipator(a, rho) for a in range(len(self.system.baths))]

    def derivative(self, t, rho):
        d = -1j * (self.H @ rho - rho @ self.H)
        for D in self.dissipators(rho):
            d = d + D
        return d


def _check_rho(system, rho):
    rho = np.asarray(rho)
    if rho.shape != (system.dim, system.dim):
        raise ValueError(f"state shape {rho.shape} does not match system dim {system.dim}")
    return rho


def redfield_dissipator(system, bath_index, rho):
    """Contribution of bath ``bath_index`` to ``drho/dt`` (Redfield form)."""
    rho = _check_rho(system, rho)
    return MasterEquation(system, 'redfield').redfield_dissipator(bath_index, rho)


def gksl_dissipator(system, bath_index, rho):
    """Contribution of bath ``bath_index`` to ``drho/dt`` (secular GKSL form)."""
    rho = _check_rho(system, rho)
    return MasterEquation(system, 'gksl').gksl_dissipator(bath_index, rho)


def default_dt(eq: MasterEquation):
    w = eq.max_bohr_frequency()
    return 1e-3 / w if w > 0 else 1e-3


def evolve(system, rho0, dt=None, t_final=1.0, engine='redfield',
           positivity_tol=DEFAULT_POSITIVITY_TOL, save_every=1):
    """Integrate ``drho/dt = -i[H, rho] + sum_a D_a[rho]`` with fixed-step RK4."""
    eq = system if isinstance(system, MasterEquation) else MasterEquation(system, engine)
    rho0 = _check_rho(eq.system, rho0)
    dt = default_dt(eq) if dt is None else dt
    return evolve_rk4(eq.derivative, rho0, dt, t_final,
                      positivity_tol=positivity_tol, save_every=save_every)


# --- Dicke ladder fast path ------------------------------------------------

@dataclass
class DickeLadder:
    """Populations of the Dicke states ``m = L/2, ..., -L/2`` (top first)."""
    L: int
    populations: np.ndarray
    omega_q: float = 1.0

    def __post_init__(self):
        self.populations = np.asarray(self.populations, dtype=float)
        if self.populations.shape != (self.L + 1,):
            raise ValueError(f"need {self.L + 1} populations, got {self.populations.shape}")
        if np.any(self.populations < -1e-12):
            raise ValueError("negative ladder population")
        if abs(self.populations.sum() - 1) > 1e-10:
            raise ValueError(f"ladder populations sum to {self.populations.sum()}")

    @classmethod
    def dicke(cls, L, m, omega_q=1.0):
        p = np.zeros(L + 1)
        p[int(round(L / 2 - m))] = 1.0
        return cls(L, p, omega_q)

    @classmethod
    def gibbs(cls, L, beta, omega_q=1.0):
        e = -beta * omega_q * ladder_m_values(L)
        p = np.exp(e - e.max())
        return cls(L, p / p.sum(), omega_q)

    @property
    def m_values(self):
        return ladder_m_values(self.L)

    @property
    def energies(self):
        return self.omega_q * self.m_values

    def energy(self):
        return float(self.energies @ self.populations)


def ladder_rates(L):
    """Squared ladder coefficients ``(C_{m,-}^2, C_{m,+}^2)`` for every rung."""
    ms = ladder_m_values(L)
    down = np.array([ladder_coefficient(L, m, '-') ** 2 for m in ms])
    up = np.array([ladder_coefficient(L, m, '+') ** 2 for m in ms])
    # edges are exactly zero in floating point; make it explicit
    down[-1] = up[0] = 0.0
    return down, up


def _ladder_rhs(c2_down, c2_up, gamma_down, gamma_up):
    def rhs(t, p):
        f = gamma_down * c2_down * p
        u = gamma_up * c2_up * p
        dp = -f - u
        dp[1:] += f[:-1]
        dp[:-1] += u[1:]
        return dp
    return rhs


def ladder_derivative(ladder: DickeLadder, gamma_down, gamma_up):
    """Population rate equations on the symmetric Dicke ladder.

    ``gamma_down`` and ``gamma_up`` are the dressed rates (coupling included)
    at the qubit frequency and its negative.
    """
    if gamma_down < 0 or gamma_up < 0:
        raise ValueError("rates must be nonnegative")
    c2d, c2u = ladder_rates(ladder.L)
    return _ladder_rhs(c2d, c2u, gamma_down, gamma_up)(0.0, ladder.populations)


def ladder_heat_current(ladder: DickeLadder, gamma_down, gamma_up):
    return float(ladder.energies @ ladder_derivative(ladder, gamma_down, gamma_up))


def evolve_ladder(ladder: DickeLadder, gamma_down, gamma_up, dt, t_final, save_every=1):
    """RK4 evolution of the ladder populations; returns a :class:`Trajectory` of arrays."""
    c2d, c2u = ladder_rates(ladder.L)
    rhs = _ladder_rhs(c2d, c2u, gamma_down, gamma_up)

    def validate(t, p):
        if np.any(p < -1e-12) or abs(p.sum() - 1) > 1e-10:
            raise ValueError(f"ladder populations invalid at t={t:.6g}")

    n = n_steps_for(dt, t_final)
    h = t_final / n if n else dt
    times, states = rk4_steps(rhs, ladder.populations, h, n,
                              save_every=save_every, callback=validate)
    return Trajectory(times, states)


def ladder_to_dense(ladder: DickeLadder, dicke_vectors):
    """Dense ``sum_m p_m |m><m|`` from Dicke vectors (columns, top first)."""
    V = dicke_vectors
    return (V * ladder.populations) @ V.conj().T


def check_state(rho, positivity_tol=DEFAULT_POSITIVITY_TOL):
    return check_density(rho, positivity_tol)
