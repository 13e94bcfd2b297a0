"""Collective three-level quantum battery charged by two baths.

Bath H drives ``|0>^L <-> |-1>^L`` (gap ``omega_H = L (E0 - Em1)``) and
bath C drives ``|0>^L <-> |1>^L`` (gap ``omega_C = L (E0 - E1)``). With
``beta_X = beta0_X / L`` the rates are L-independent and the network is
``L^2`` times the single-particle one, so charging is ``L^2`` times faster
while the stored ergotropy is extensive.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy.optimize import brentq

from .. import spectral
from ..operators import battery_operators, kron_power, local_sum
from .base import RateNetwork, ScenarioResult

CHARGE_FRACTION = 0.9


def _check_levels(E1, E0, Em1):
    if not Em1 < E1 < E0:
        raise ValueError(f"battery needs E_-1 < E_1 < E_0, got ({E1}, {E0}, {Em1})")


def battery_exponents(E1, E0, Em1, beta_H0, beta_C0):
    """``(beta_C omega_C, beta_H omega_H)``; both are independent of L."""
    _check_levels(E1, E0, Em1)
    return beta_C0 * (E0 - E1), beta_H0 * (E0 - Em1)


def battery_network(E1, E0, Em1, beta_H0, beta_C0, L, rates=None):
    """Three-state network over ``(|1>^L, |0>^L, |-1>^L)``.

    ``rates`` gives each bath's downward (emission) rate, default 1; the
    upward rate follows from detailed balance.
    """
    rates = {'H': 1.0, 'C': 1.0, **(rates or {})}
    if any(r < 0 for r in rates.values()):
        raise ValueError("rates must be nonnegative")
    a, b = battery_exponents(E1, E0, Em1, beta_H0, beta_C0)
    dH, dC = rates['H'], rates['C']
    uH, uC = dH * np.exp(-b), dC * np.exp(-a)
    MH = np.array([[0, 0, 0], [0, -dH, uH], [0, dH, -uH]], dtype=float)
    MC = np.array([[-uC, dC, 0], [uC, -dC, 0], [0, 0, 0]], dtype=float)
    energies = L * np.array([E1, E0, Em1], dtype=float)
    return RateNetwork({'H': L ** 2 * MH, 'C': L ** 2 * MC}, energies,
                       ['1', '0', '-1'])


def ergotropy_closed_form(E1, E0, Em1, beta_H0, beta_C0, L):
    """``L (e^a - e^b) (E1 - Em1) / (1 + e^a + e^b)`` with ``a = beta_C omega_C``, ``b = beta_H omega_H``."""
    a, b = battery_exponents(E1, E0, Em1, beta_H0, beta_C0)
    return L * (np.exp(a) - np.exp(b)) / (1 + np.exp(a) + np.exp(b)) * (E1 - Em1)


def diagonal_ergotropy(energies, populations):
    """Ergotropy of a state diagonal in the energy basis."""
    E = np.asarray(energies, dtype=float)
    p = np.asarray(populations, dtype=float)
    passive = np.sort(E) @ np.sort(p)[::-1]
    return max(float(E @ p - passive), 0.0)


def charging_time(net: RateNetwork, p0, target, t_max=None):
    """First time the ergotropy reaches ``target``, located by bracketing and brentq."""
    evals = np.linalg.eigvals(net.rate_matrix).real
    gap = -max(e for e in evals if e < -1e-14 * max(1.0, np.max(np.abs(evals))))
    t_max = t_max if t_max is not None else 50.0 / gap
    f = lambda t: diagonal_ergotropy(net.energies, net.propagate(p0, t)) - target
    grid = np.linspace(0.0, t_max, 2001)
    vals = np.array([f(t) for t in grid])
    hit = np.flatnonzero(vals >= 0)
    if not len(hit):
        raise RuntimeError("ergotropy never reaches the charging target")
    i = hit[0]
    if i == 0:
        return 0.0
    return float(brentq(f, grid[i - 1], grid[i], xtol=1e-15 * t_max, rtol=1e-14))


@dataclass(kw_only=True)
class BatteryResult(ScenarioResult):
    populations: np.ndarray = None
    ergotropy: float = 0.0
    ergotropy_closed_form: float = 0.0
    parallel_ergotropy: float = 0.0
    charging_time: Optional[float] = None
    parallel_charging_time: Optional[float] = None
    time_ratio: Optional[float] = None
    advantage: Optional[float] = None
    currents: Dict[str, float] = field(default_factory=dict)
    steady_residual: float = 0.0


def battery_steady_state(E1, E0, Em1, beta_H0, beta_C0, L, rates=None,
                         charge_fraction=CHARGE_FRACTION):
    """Steady state, ergotropy and collective-vs-parallel charging comparison.

    The parallel scheme is L independent single particles with the same
    ``beta0`` constants; it stores the same ergotropy but charges ``L^2``
    times more slowly. ``advantage`` is the ratio of average charging powers
    (ergotropy over charging time), which equals the time ratio.
    """
    a, b = battery_exponents(E1, E0, Em1, beta_H0, beta_C0)
    net = battery_network(E1, E0, Em1, beta_H0, beta_C0, L, rates)
    p = net.steady_state()
    erg = diagonal_ergotropy(net.energies, p)
    single = battery_network(E1, E0, Em1, beta_H0, beta_C0, 1, rates)
    p1 = single.steady_state()
    erg1 = diagonal_ergotropy(single.energies, p1)
    res = BatteryResult(scenario='battery', L=L, current=0.0, populations=p,
                        ergotropy=erg, ergotropy_closed_form=ergotropy_closed_form(
                            E1, E0, Em1, beta_H0, beta_C0, L),
                        closed_form=None, parallel_ergotropy=L * erg1,
                        currents=net.currents(p), steady_residual=net.residual(p))
    if not b < a:
        res.notes.append("no population inversion (beta_H omega_H >= beta_C omega_C); "
                         "ergotropy is zero")
        res.ergotropy = 0.0
        return res
    p0 = np.array([0.0, 0.0, 1.0])
    t_coll = charging_time(net, p0, charge_fraction * erg)
    t_par = charging_time(single, p0, charge_fraction * erg1)
    res.charging_time = t_coll
    res.parallel_charging_time = t_par
    res.time_ratio = t_par / t_coll
    res.advantage = (erg / t_coll) / (L * erg1 / t_par)
    # the characteristic "current" of this scenario is the average charging power
    res.current = erg / t_coll
    res.parallel_baseline = L * erg1 / t_par
    return res


def battery_dense_system(E1, E0, Em1, beta_H0, beta_C0, L, rates=None, g=1.0):
    """Full 3^L system with flat_thermal baths for cross-checking the network."""
    rates = {'H': 1.0, 'C': 1.0, **(rates or {})}
    h, sp, sm = battery_operators(E1, E0, Em1)
    H = local_sum(h, L, 3)
    AH = g * L * kron_power(sm, L)
    AC = g * L * kron_power(sp, L)
    beta_H, beta_C = beta_H0 / L, beta_C0 / L
    baths = [
        spectral.BathSpec('H', beta_H, [(AH, spectral.flat_thermal(rates['H'] / g ** 2, beta_H))]),
        spectral.BathSpec('C', beta_C, [(AC, spectral.flat_thermal(rates['C'] / g ** 2, beta_C))]),
    ]
    return spectral.SystemSpec(H, baths)


def battery_product_indices(L):
    """Dense indices of ``|1>^L, |0>^L, |-1>^L`` in the 3^L basis."""
    d = 3 ** L
    return [0, (d - 1) // 2, d - 1]
