"""m-body interaction: a single m-body noise operator coupled to white noise."""

from dataclasses import dataclass
from math import comb, exp, lgamma, log

import numpy as np

from .. import spectral
from ..bounds import check_bounds
from ..master import MasterEquation
from ..numcore import pure_state
from ..operators import MAX_DENSE_L, collective_j, m_body_noise
from ..thermo import heat_current
from .base import ScenarioResult


def _log_comb(n, k):
    return lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)


def mbody_current_closed_form(L, m, gamma_wn, omega_q):
    """``J(0) = -gamma_wn omega_q L^2 m / C(L, m)`` from the fully excited state."""
    if not 1 <= m <= L:
        raise ValueError(f"need 1 <= m <= L, got m={m}, L={L}")
    if L <= 60:
        return -gamma_wn * omega_q * L * L * m / comb(L, m)
    return -gamma_wn * omega_q * exp(2 * log(L) + log(m) - _log_comb(L, m))


def mbody_system(L, m, gamma_wn, omega_q, g=1.0, noise_axis='x', max_L=MAX_DENSE_L):
    """``H = omega_q J_z`` with one white-noise bath through the m-body operator.

    ``noise_axis='z'`` swaps the noise for ``2 g J_z``, which is diagonal in
    the energy basis and moves no heat.
    """
    H = omega_q * collective_j('z', L)
    if noise_axis == 'x':
        A = m_body_noise(L, m, g, max_L)
    elif noise_axis == 'z':
        A = 2 * g * collective_j('z', L)
    else:
        raise ValueError(f"noise_axis must be 'x' or 'z', got {noise_axis!r}")
    model = (spectral.white_noise(gamma_wn, g) if g != 0
             else spectral.flat_zero_temperature(0.0))
    bath = spectral.BathSpec('B', np.inf, [(A, model)])
    return spectral.SystemSpec(H, [bath])


@dataclass(kw_only=True)
class MBodyResult(ScenarioResult):
    m: int = 0


def mbody_simulate(L, m, gamma_wn, omega_q, g=1.0, engine='redfield',
                   with_bounds=True, noise_axis='x', xi=None, strict=True):
    """Heat current at ``t = 0`` from ``|L/2>`` on the dense 2^L space."""
    system = mbody_system(L, m, gamma_wn, omega_q, g, noise_axis)
    if xi is not None:
        A, model = system.baths[0].channels[0]
        model = spectral.SpectralModel(model.kind, model.gamma0, model.beta, model.window, xi)
        system.baths[0] = spectral.BathSpec('B', np.inf, [(A, model)])
    eq = MasterEquation(system, engine)
    rho = np.zeros((system.dim, system.dim))
    rho[0, 0] = 1.0
    J = heat_current(system.hamiltonian, eq.dissipator(0, rho))
    rep = None
    if with_bounds:
        rep = check_bounds(system.hamiltonian, system.baths[0], J, basis=eq.basis,
                           strict=strict)
    closed = mbody_current_closed_form(L, m, gamma_wn, omega_q) if noise_axis == 'x' else 0.0
    return MBodyResult(scenario='mbody', L=L, m=m, current=J, closed_form=closed,
                       bounds=rep, parallel_baseline=L * abs(gamma_wn * omega_q))


def mbody_initial_state(L):
    psi = np.zeros(2 ** L)
    psi[0] = 1.0
    return pure_state(psi)
