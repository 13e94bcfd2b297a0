"""Superradiant decay through the Dicke ladder."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import spectral
from ..bounds import check_bounds
from ..master import (DickeLadder, MasterEquation, Trajectory, evolve_ladder,
                      ladder_heat_current, ladder_rates)
from ..numcore import pure_state
from ..operators import collective_j, dicke_state, ladder_j
from ..thermo import heat_current
from .base import ScenarioResult

MAX_LADDER_L = 10001
MAX_DENSE_SR_L = 12


def _check_odd(L):
    if int(L) != L or L < 1 or L % 2 == 0:
        raise ValueError(f"superradiance needs an odd particle count, got L={L}")
    return int(L)


def superradiance_closed_form(L, gamma0, omega_q):
    """``J(0) = -(1/4) gamma0 omega_q (L + 1)^2`` from ``|1/2>``."""
    L = _check_odd(L)
    return -0.25 * gamma0 * omega_q * (L + 1) ** 2


def superradiance_operators(L, omega_q, g=1.0, backend='ladder'):
    """``(H, A) = (omega_q J_z, 2 g J_x)`` on the ladder or the full space."""
    J = ladder_j if backend == 'ladder' else collective_j
    return omega_q * J('z', L), 2 * g * J('x', L)


def superradiance_system(L, gamma0, omega_q, g=1.0, backend='ladder'):
    """Zero-temperature flat bath whose dressed emission rate is ``gamma0``."""
    H, A = superradiance_operators(L, omega_q, g, backend)
    model = spectral.white_noise(gamma0, g)
    return spectral.SystemSpec(H, [spectral.BathSpec('B', np.inf, [(A, model)])])


@dataclass(kw_only=True)
class SuperradianceResult(ScenarioResult):
    engine: str = 'ladder'
    trajectory: Optional[Trajectory] = None
    energy_trajectory: Optional[np.ndarray] = None
    emitted_energy: Optional[float] = None


def cascade_time(L, gamma0):
    """Time after which the ladder population left above the ground rung is negligible."""
    return 40.0 / (gamma0 * L)


def superradiance_simulate(L, gamma0, omega_q, engine='ladder', g=1.0,
                           cascade=False, t_final=None, dt=None, save_every=None,
                           with_bounds=True, dense_engine='redfield'):
    """Heat current from ``|1/2>`` and, optionally, the full cascade.

    ``engine='ladder'`` uses the (L+1)-dimensional symmetric sector;
    ``engine='dense'`` builds the 2^L-dimensional operators and evaluates the
    ``dense_engine`` dissipator.
    """
    L = _check_odd(L)
    if engine == 'ladder':
        if L > MAX_LADDER_L:
            raise ValueError(f"ladder path supports L <= {MAX_LADDER_L}")
        ladder = DickeLadder.dicke(L, 0.5, omega_q)
        J = ladder_heat_current(ladder, gamma0, 0.0)
    elif engine == 'dense':
        if L > MAX_DENSE_SR_L:
            raise ValueError(f"dense path supports L <= {MAX_DENSE_SR_L}")
        system = superradiance_system(L, gamma0, omega_q, g, 'dense')
        eq = MasterEquation(system, dense_engine)
        rho = pure_state(dicke_state(L, 0.5))
        J = heat_current(system.hamiltonian, eq.dissipator(0, rho))
    else:
        raise ValueError(f"engine must be 'ladder' or 'dense', got {engine!r}")

    rep = None
    if with_bounds:
        sr = superradiance_system(L, gamma0, omega_q, g, 'ladder')
        rep = check_bounds(sr.hamiltonian, sr.baths[0], J)
    res = SuperradianceResult(scenario='superradiance', L=L, current=J, engine=engine,
                              closed_form=superradiance_closed_form(L, gamma0, omega_q),
                              bounds=rep, parallel_baseline=L * gamma0 * omega_q)
    if cascade:
        ladder = DickeLadder.dicke(L, 0.5, omega_q)
        t_final = cascade_time(L, gamma0) if t_final is None else t_final
        if dt is None:
            c2d, _ = ladder_rates(L)
            dt = 0.05 / (gamma0 * c2d.max())
        n = int(np.ceil(t_final / dt))
        save_every = save_every or max(1, n // 1000)
        traj = evolve_ladder(ladder, gamma0, 0.0, dt, t_final, save_every)
        E = np.array([ladder.energies @ p for p in traj.states])
        res.trajectory = traj
        res.energy_trajectory = E
        res.emitted_energy = float(E[0] - E[-1])
    return res
