"""Superabsorption: a ``J_z^2`` anharmonicity plus a band-pass bath.

The anharmonicity spaces the ladder rungs by ``2 Omega`` so that a bath
passing only energies near ``omega_q`` drives the single transition
``|-1/2> -> |1/2>``. Its rate grows as ``(L + 1)^2 / 4`` while the largest
gap bridged by ``2 g J_x`` is ``omega_q + (L - 1) Omega``.
"""

from dataclasses import dataclass

import numpy as np

from .. import spectral
from ..bounds import check_bounds, delta_e
from ..master import MasterEquation
from ..numcore import hermitian_eig
from ..operators import ladder_j
from ..thermo import heat_current
from .base import ScenarioResult
from .superradiance import _check_odd


def superabsorption_delta_e(L, Omega, omega_q):
    return omega_q + (L - 1) * Omega


def superabsorption_current_closed_form(L, gamma0, omega_q):
    """Absorbed heat current from ``|-1/2>`` through the filtered transition."""
    L = _check_odd(L)
    return 0.25 * gamma0 * omega_q * (L + 1) ** 2


def superabsorption_system(L, Omega, omega_q, gamma0, g=1.0):
    """Ladder-sector system with a band-pass window centred on ``-omega_q``.

    The window half-width is ``Omega`` (neighbouring rungs sit ``2 Omega``
    away); for ``Omega = 0`` all rungs are degenerate and the width falls
    back to ``omega_q / 2``.
    """
    if Omega < 0:
        raise ValueError("Omega must be nonnegative")
    Jz = ladder_j('z', L)
    H = omega_q * Jz + Omega * Jz @ Jz
    A = 2 * g * ladder_j('x', L)
    half = Omega if Omega > 0 else 0.5 * omega_q
    model = spectral.band_pass(gamma0 / g ** 2, (-omega_q - half, -omega_q + half))
    return spectral.SystemSpec(H, [spectral.BathSpec('B', np.inf, [(A, model)])])


@dataclass(kw_only=True)
class SuperabsorptionResult(ScenarioResult):
    Omega: float = 0.0
    delta_e: float = 0.0
    delta_e_expected: float = 0.0
    bound2_ratio: float = 0.0
    narrative: str = ''


def superabsorption_bound_analysis(L, Omega, omega_q, gamma0, g=1.0):
    L = _check_odd(L)
    system = superabsorption_system(L, Omega, omega_q, gamma0, g)
    H = system.hamiltonian
    bath = system.baths[0]
    eq = MasterEquation(system, 'redfield')
    basis = eq.basis
    dE = delta_e(bath.operators[0], basis)

    # |-1/2> sits at ladder index (L + 1) / 2
    rho = np.zeros((L + 1, L + 1))
    k = (L + 1) // 2
    rho[k, k] = 1.0
    J = heat_current(H, eq.dissipator(0, rho))
    rep = check_bounds(H, bath, J, basis=basis)
    ratio = abs(J) / rep.bound2
    narrative = (f"absorption current {J:.6g} grows as (L+1)^2 while bound2 = {rep.bound2:.6g} "
                 f"carries dE = {dE:.6g}; ratio {ratio:.3g}")
    res = SuperabsorptionResult(
        scenario='superabsorption', L=L, current=J, Omega=Omega,
        closed_form=superabsorption_current_closed_form(L, gamma0, omega_q),
        bounds=rep, parallel_baseline=L * gamma0 * omega_q, delta_e=dE,
        delta_e_expected=superabsorption_delta_e(L, Omega, omega_q),
        bound2_ratio=ratio, narrative=narrative)
    if abs(J - res.closed_form) > 1e-9 * abs(res.closed_form):
        # e.g. Omega = omega_q: the spectrum is symmetric about m = -1/2 and
        # the |-1/2> -> |-3/2> transition also absorbs at -omega_q
        res.notes.append("pass-band admits more than the |-1/2> -> |1/2> transition; "
                         "current differs from the single-transition closed form")
    return res


def superabsorption_spectrum(L, Omega, omega_q):
    """Ladder energies ``omega_q m + Omega m^2`` in ascending order (for checks)."""
    Jz = ladder_j('z', L)
    return hermitian_eig(omega_q * Jz + Omega * Jz @ Jz).eigenvalues
