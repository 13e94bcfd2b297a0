"""Three-bath heat engine on the two extreme Dicke states ``|L/2>`` and ``|-L/2>``.

Each bath couples through ``g L sigma_x^{(1)} ... sigma_x^{(L)}``, which
connects only the fully excited and fully deexcited states. Transitions
exchange ``L omega_q`` and the rate network is ``L^2`` times the
single-particle one, so the power grows as ``L^3`` at fixed efficiency.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .. import spectral
from ..bounds import BoundReport, check_bounds
from ..thermo import ThermoReport, efficiency_and_cop, first_law_residual
from .base import RateNetwork, ScenarioResult

BATHS = ('H', 'C', 'W')
W_BETA_FACTOR = 1e-6


def _check_rates(rates):
    out = {}
    for a in BATHS:
        if a not in rates:
            raise ValueError(f"missing rates for bath {a!r}")
        up, down = (float(x) for x in rates[a])
        if up < 0 or down < 0:
            raise ValueError(f"bath {a!r} has a negative rate")
        out[a] = (up, down)
    if sum(u + d for u, d in out.values()) <= 0:
        raise ValueError("all engine rates vanish")
    return out


def rates_from_temperatures(gamma_down: Dict[str, float], beta0: Dict[str, float], omega_q):
    """Detailed-balance rates ``(up, down)`` with ``up = down exp(-beta0 omega_q)``.

    ``beta0`` holds the L-independent constants ``beta_X L``. A missing
    ``'W'`` entry is set to ``1e-6 beta0['H']`` (a near-infinite temperature
    work reservoir).
    """
    beta0 = dict(beta0)
    beta0.setdefault('W', W_BETA_FACTOR * beta0['H'])
    return {a: (gamma_down[a] * np.exp(-beta0[a] * omega_q), gamma_down[a]) for a in BATHS}


def effective_beta(up, down, L, omega_q):
    """Inverse temperature implied by detailed balance over a gap ``L omega_q``."""
    if down == 0 and up == 0:
        return 0.0
    if up == 0:
        return np.inf
    if down == 0:
        return -np.inf
    return float(np.log(down / up) / (L * omega_q))


def engine_network(rates, omega_q, L):
    rates = _check_rates(rates)
    parts = {a: L ** 2 * np.array([[-d, u], [d, -u]]) for a, (u, d) in rates.items()}
    E = L * omega_q / 2
    return RateNetwork(parts, [E, -E], ['L/2', '-L/2'])


def engine_closed_form(rates, omega_q, L):
    """Steady populations, power and efficiency from the closed-form expressions."""
    rates = _check_rates(rates)
    G_up = sum(u for u, _ in rates.values())
    G_down = sum(d for _, d in rates.values())
    G = G_up + G_down
    p = np.array([G_up, G_down]) / G
    uW, dW = rates['W']
    uH, dH = rates['H']
    uC, dC = rates['C']
    P = omega_q * L ** 3 / G * (dW * G_up - uW * G_down)
    denom = dH * G_up - uH * G_down
    eta = 1 + (dC * G_up - uC * G_down) / denom if denom != 0 else None
    return p, P, eta


@dataclass(kw_only=True)
class EngineResult(ScenarioResult):
    populations: np.ndarray = None
    currents: Dict[str, float] = field(default_factory=dict)
    power: float = 0.0
    power_closed_form: float = 0.0
    efficiency: Optional[float] = None
    efficiency_closed_form: Optional[float] = None
    carnot_efficiency: Optional[float] = None
    efficiency_deficit: Optional[float] = None
    betas: Dict[str, float] = field(default_factory=dict)
    entropy_production: float = 0.0
    first_law_residual: float = 0.0
    steady_residual: float = 0.0
    thermo: Optional[ThermoReport] = None
    bath_bounds: Dict[str, BoundReport] = field(default_factory=dict)


def engine_reduced_system(rates, omega_q, L, g=1.0):
    """Two-state (``|L/2>, |-L/2>``) operators with flat_thermal baths.

    Norms, commutator norms and gaps of these 2x2 operators equal those of
    the full 2^L operators, so they give the same bounds at any L. Each bath
    carries ``xi = max(up, down) / (2 g^2)``, the largest bare rate.
    """
    rates = _check_rates(rates)
    E = L * omega_q / 2
    H = np.diag([E, -E])
    A = g * L * np.array([[0.0, 1.0], [1.0, 0.0]])
    baths = []
    for a, (u, d) in rates.items():
        beta = effective_beta(u, d, L, omega_q)
        xi = max(u, d) / (2 * g ** 2)
        if d == 0 and u > 0:
            raise ValueError(f"bath {a!r}: pure absorption is not a flat_thermal spectrum")
        model = spectral.flat_thermal(d / g ** 2, beta, xi=xi)
        baths.append(spectral.BathSpec(a, beta, [(A, model)]))
    return spectral.SystemSpec(H, baths)


def engine_dense_system(rates, omega_q, L, g=1.0):
    """Full 2^L system for cross-checking the rate network with dense GKSL."""
    from ..operators import collective_j, m_body_noise
    red = engine_reduced_system(rates, omega_q, L, g)
    H = omega_q * collective_j('z', L)
    A = m_body_noise(L, L, g)
    baths = [spectral.BathSpec(b.label, b.beta, [(A, b.models[0])]) for b in red.baths]
    return spectral.SystemSpec(H, baths)


def heat_engine_steady_state(rates, omega_q, L, g=1.0, with_bounds=True, strict=True):
    """Steady state of the three-bath engine.

    ``rates`` maps ``'H', 'C', 'W'`` to ``(gamma_up, gamma_down)``.
    """
    net = engine_network(rates, omega_q, L)
    p = net.steady_state()
    J = net.currents(p)
    p_cf, P_cf, eta_cf = engine_closed_form(rates, omega_q, L)
    rates = _check_rates(rates)
    betas = {a: effective_beta(u, d, L, omega_q) for a, (u, d) in rates.items()}
    sigma = 0.0
    for a in BATHS:
        bJ = betas[a] * J[a] if J[a] != 0 else 0.0
        sigma -= bJ
    th = efficiency_and_cop(J['H'], J['C'], J['W'], betas['H'], betas['C'])
    th.entropy_rate = 0.0
    th.entropy_production = sigma
    eta = th.efficiency
    bath_bounds = {}
    if with_bounds:
        red = engine_reduced_system(rates, omega_q, L, g)
        for bath in red.baths:
            bath_bounds[bath.label] = check_bounds(red.hamiltonian, bath, J[bath.label],
                                                   strict=strict)
    res = EngineResult(
        scenario='engine', L=L, current=-J['W'], closed_form=P_cf,
        bounds=bath_bounds.get('W'), parallel_baseline=L * abs(P_cf) / L ** 3,
        populations=p, currents=J, power=-J['W'], power_closed_form=P_cf,
        efficiency=eta, efficiency_closed_form=eta_cf if th.regime == 'engine' else None,
        carnot_efficiency=th.carnot_efficiency,
        efficiency_deficit=(th.carnot_efficiency - eta
                            if eta is not None and th.carnot_efficiency is not None else None),
        betas=betas, entropy_production=sigma,
        first_law_residual=first_law_residual(list(J.values())),
        steady_residual=net.residual(p), thermo=th, bath_bounds=bath_bounds)
    res.notes.extend(th.notes)
    return res


def engine_populations_from_dense(rho, L):
    """``(p_{L/2}, p_{-L/2})`` read off a dense 2^L density matrix."""
    return np.array([rho[0, 0].real, rho[-1, -1].real])
