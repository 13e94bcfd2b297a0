"""
Thermodynamic observables: heat currents, entropy production, efficiency and
coefficient of performance, and ergotropy.

Sign conventions: ``J_a > 0`` means energy flows from bath ``a`` into the
system. The entropy is the standard von Neumann entropy ``-Tr rho ln rho``
and the entropy production rate is ``dS/dt - sum_a beta_a J_a``.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .numcore import check_density, expectation

log = logging.getLogger(__name__)

LOG_FLOOR = 1e-14
DEAD_BAND = 1e-15


@dataclass
class HeatCurrentRecord:
    time: float
    per_bath: List[Tuple[str, float]]
    total: float = field(init=False)

    def __post_init__(self):
        self.total = float(sum(J for _, J in self.per_bath))

    def __getitem__(self, label):
        for lab, J in self.per_bath:
            if lab == label:
                return J
        raise KeyError(label)

    @property
    def values(self):
        return np.array([J for _, J in self.per_bath])

    def additivity_residual(self):
        return abs(self.total - float(np.sum(self.values)))


@dataclass
class ThermoReport:
    entropy_rate: Optional[float] = None
    entropy_production: Optional[float] = None
    efficiency: Optional[float] = None
    cop: Optional[float] = None
    carnot_efficiency: Optional[float] = None
    carnot_cop: Optional[float] = None
    regime: str = 'undetermined'
    log_regularized: bool = False
    notes: List[str] = field(default_factory=list)


def heat_current(H, dissipator_output):
    """``J_a = Tr(H D_a[rho])``."""
    return expectation(H, dissipator_output)


def von_neumann_entropy(rho):
    """``S = -Tr rho ln rho`` in nats; eigenvalues below 1e-14 contribute 0."""
    lam = np.linalg.eigvalsh(check_density(rho))
    lam = lam[lam > LOG_FLOOR]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


def entropy_rate(rho, drho):
    """``dS/dt = -Tr(drho ln rho)`` and whether the log floor was needed.

    Eigenvalues below 1e-12 that ``drho`` populates make the logarithm
    singular; those are regularised with a floor of 1e-14 and flagged.
    """
    rho = np.asarray(rho)
    drho = np.asarray(drho)
    lam, V = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    flow = np.real(np.einsum('ji,jk,ki->i', V.conj(), drho, V))
    small = lam < 1e-12
    flagged = bool(np.any(small & (np.abs(flow) > LOG_FLOOR)))
    if flagged:
        log.info("entropy rate: log regularised at floor %g", LOG_FLOOR)
    logs = np.log(np.maximum(lam, LOG_FLOOR))
    return float(-np.sum(flow * logs)), flagged


def _beta_times_current(beta, J):
    if np.isinf(beta):
        if J == 0:
            return 0.0
        return np.copysign(np.inf, beta * J)
    return beta * J


def entropy_production_rate(rho, drho, currents: Sequence[float], betas: Sequence[float],
                            return_flag=False):
    """``sigma = dS/dt - sum_a beta_a J_a``.

    An infinite ``beta`` with a current flowing out of the system gives
    ``+inf``, the zero-temperature limit.
    """
    if len(currents) != len(betas):
        raise ValueError("need one inverse temperature per current")
    dS, flagged = entropy_rate(rho, drho)
    flux = sum(_beta_times_current(b, J) for b, J in zip(betas, currents))
    sigma = dS - flux
    return (sigma, flagged) if return_flag else sigma


def first_law_residual(currents, floor=0.0):
    """``|sum_a J_a| / max(max_a |J_a|, floor)``; 0 when the denominator vanishes.

    ``floor`` sets the scale below which currents count as roundoff, so a
    detailed-balance steady state with ``J_a ~ 1e-16`` reports ~1e-16, not 1.
    """
    J = np.asarray(currents, dtype=float)
    scale = max(float(np.max(np.abs(J))) if J.size else 0.0, floor)
    return float(abs(J.sum()) / scale) if scale > 0 else 0.0


def carnot_efficiency(beta_H, beta_C):
    """``1 - beta_H / beta_C``; None when ``beta_C = 0``."""
    return 1.0 - beta_H / beta_C if beta_C != 0 else None


def carnot_cop(beta_H, beta_C):
    """``beta_H / (beta_C - beta_H)``; None for equal temperatures."""
    return beta_H / (beta_C - beta_H) if beta_C != beta_H else None


def work_bath_efficiency_bound(beta_H, beta_C, beta_W):
    """Second-law ceiling on ``eta = -J_W / J_H`` when bath W has finite temperature.

    From ``J_H + J_C + J_W = 0`` and ``sum_a beta_a J_a <= 0`` one gets
    ``eta <= (beta_C - beta_H) / (beta_C - beta_W)`` for ``beta_W < beta_C``;
    ``beta_W = 0`` recovers the Carnot value. Returns None if ``beta_W >= beta_C``.
    """
    if not beta_W < beta_C:
        return None
    return (beta_C - beta_H) / (beta_C - beta_W)


def efficiency_and_cop(J_H, J_C, J_W, beta_H, beta_C):
    """Efficiency or COP depending on the sign pattern of the currents.

    Engine: ``J_H >= 0, J_C <= 0, J_W <= 0`` gives ``eta = 1 + J_C / J_H``.
    Refrigerator: ``J_C >= 0, J_H <= 0, J_W >= 0`` gives ``eps = J_C / J_W``.
    Signs are read with a dead-band of 1e-15; any other pattern leaves both
    fields empty.
    """
    rep = ThermoReport(carnot_efficiency=carnot_efficiency(beta_H, beta_C),
                       carnot_cop=carnot_cop(beta_H, beta_C))
    pos = lambda x: x >= -DEAD_BAND
    neg = lambda x: x <= DEAD_BAND
    if pos(J_H) and neg(J_C) and neg(J_W) and not (abs(J_H) < DEAD_BAND and abs(J_C) < DEAD_BAND):
        rep.regime = 'engine'
        if abs(J_H) < DEAD_BAND:
            rep.notes.append("efficiency undefined: |J_H| below 1e-15")
        else:
            rep.efficiency = 1.0 + J_C / J_H
            if (rep.carnot_efficiency is not None
                    and rep.efficiency > rep.carnot_efficiency + 1e-12):
                rep.notes.append("regime inconsistency: efficiency exceeds the Carnot value")
    elif pos(J_C) and neg(J_H) and pos(J_W):
        rep.regime = 'refrigerator'
        if abs(J_W) < DEAD_BAND:
            rep.notes.append("COP undefined: |J_W| below 1e-15")
        else:
            rep.cop = J_C / J_W
    else:
        rep.regime = 'mixed'
        rep.notes.append("current signs match neither engine nor refrigerator")
    return rep


def passive_energy(H, rho):
    """Energy of the passive state: descending populations on ascending levels."""
    E = np.linalg.eigvalsh(H)
    lam = np.linalg.eigvalsh(rho)[::-1]
    return float(E @ lam)


def ergotropy(H, rho):
    """Maximal energy extractable by a unitary, ``Tr(H rho) - E_passive``."""
    H = np.asarray(H)
    rho = np.asarray(rho)
    if H.shape != rho.shape:
        raise ValueError(f"dimension mismatch: {H.shape} vs {rho.shape}")
    val = expectation(H, rho) - passive_energy(H, rho)
    if val < -1e-12 * max(1.0, float(np.max(np.abs(H)))):
        raise ArithmeticError(f"negative ergotropy {val:.3e}")
    return max(val, 0.0)
