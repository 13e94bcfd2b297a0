"""Shared result type and the classical rate-network model."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from ..bounds import BoundReport


@dataclass(kw_only=True)
class ScenarioResult:
    """Common fields of every scenario run.

    ``current`` is the signed characteristic heat current of the scenario
    and ``parallel_baseline`` the magnitude of the same quantity for L
    independent particles.
    """
    scenario: str
    L: int
    current: float
    closed_form: Optional[float] = None
    bounds: Optional[BoundReport] = None
    parallel_baseline: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    def sample(self):
        """``(L, |J|, bound1, bound2, parallel baseline)`` for scaling sweeps."""
        b1 = self.bounds.bound1 if self.bounds else None
        b2 = self.bounds.bound2 if self.bounds else None
        return (self.L, abs(self.current), b1, b2, self.parallel_baseline)


class RateNetwork:
    """Classical master equation ``dp/dt = M p`` over a few energy eigenstates.

    ``parts`` optionally splits ``M`` into per-bath generators so heat
    currents can be attributed, ``J_a = sum_i E_i (M_a p)_i``.
    """

    def __init__(self, parts: Dict[str, np.ndarray], energies: Sequence[float],
                 state_labels: Sequence[str], populations=None):
        self.parts = {k: np.asarray(v, dtype=float) for k, v in parts.items()}
        self.rate_matrix = sum(self.parts.values())
        self.energies = np.asarray(energies, dtype=float)
        self.state_labels = list(state_labels)
        n = self.dimension
        if self.rate_matrix.shape != (n, n) or len(self.state_labels) != n:
            raise ValueError("rate matrix, energies and labels disagree in size")
        for label, M in self.parts.items():
            off = M - np.diag(np.diag(M))
            if np.any(off < 0):
                raise ValueError(f"bath {label!r} has a negative transition rate")
            scale = max(1.0, float(np.max(np.abs(M))))
            if np.max(np.abs(M.sum(axis=0))) > 1e-12 * scale:
                raise ValueError(f"columns of bath {label!r} rate matrix do not sum to zero")
        self.populations = None
        if populations is not None:
            self.populations = self._check_p(populations)

    @property
    def dimension(self):
        return len(self.energies)

    @staticmethod
    def _check_p(p):
        p = np.asarray(p, dtype=float)
        if np.any(p < -1e-12) or abs(p.sum() - 1) > 1e-10:
            raise ValueError(f"invalid population vector {p}")
        return p

    def steady_state(self):
        """Null vector of the rate matrix, normalised; also stored on the network."""
        n = self.dimension
        M = self.rate_matrix.copy()
        if not np.any(M):
            raise ValueError("all rates vanish; steady state undefined")
        M[-1, :] = 1.0
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        p = np.linalg.solve(M, rhs)
        self.populations = self._check_p(p)
        return p

    def residual(self, p=None):
        p = self.populations if p is None else p
        return float(np.max(np.abs(self.rate_matrix @ p)))

    def derivative(self, p):
        return self.rate_matrix @ p

    def currents(self, p=None):
        p = self.populations if p is None else p
        return {k: float(self.energies @ (M @ p)) for k, M in self.parts.items()}

    def propagate(self, p0, t):
        return expm(self.rate_matrix * t) @ np.asarray(p0, dtype=float)

    def evolve(self, p0, times):
        """Populations at each of ``times`` (exact exponential propagation)."""
        p0 = self._check_p(p0)
        return np.array([self.propagate(p0, t) for t in times])
