"""
Sweeps of a scenario family over particle counts and power-law fits.

Each family maps ``(L, params)`` to a scenario result; the sweep collects
``(L, |J|, bound1, bound2, parallel baseline)`` per L and fits
``|J| ~ L^k`` by least squares in log-log space.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import scenarios as sc


class SweepError(RuntimeError):
    def __init__(self, L, cause):
        self.L = L
        self.cause = cause
        super().__init__(f"sweep failed at L={L}: {cause}")


def fit_exponent(samples):
    """OLS fit of ``ln value = k ln L + c``; returns ``(k, c, r2)``.

    ``samples`` is a sequence of ``(L, value)`` pairs with positive values.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError("need at least two samples to fit an exponent")
    for i, (L, v) in enumerate(samples):
        if not (v > 0 and L > 0):
            raise ValueError(f"sample {i} (L={L}, value={v}) is not positive")
    x = np.log([float(L) for L, _ in samples])
    y = np.log([float(v) for _, v in samples])
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise ValueError("need at least two distinct L values")
    k = float(np.sum((x - xm) * (y - ym)) / sxx)
    c = float(ym - k * xm)
    ss_res = np.sum((y - (k * x + c)) ** 2)
    ss_tot = np.sum((y - ym) ** 2)
    r2 = 1.0 if ss_tot == 0 else float(min(1.0, max(0.0, 1 - ss_res / ss_tot)))
    return k, c, r2


def _mbody(L, p):
    m = p.get('m', 'L')
    m = L if m in ('L', None) else int(m)
    return sc.mbody_simulate(L, m, p.get('gamma_wn', p.get('gamma0', 1.0)),
                             p.get('omega_q', 1.0), p.get('g', 1.0),
                             engine=p.get('engine', 'redfield'))


def _superradiance(L, p):
    return sc.superradiance_simulate(L, p.get('gamma0', 1.0), p.get('omega_q', 1.0),
                                     engine=p.get('engine', 'ladder'), g=p.get('g', 1.0))


def _superabsorption(L, p):
    return sc.superabsorption_bound_analysis(L, p.get('Omega', 0.3), p.get('omega_q', 1.0),
                                             p.get('gamma0', 1.0), p.get('g', 1.0))


def _engine(L, p):
    return sc.heat_engine_steady_state(p['rates'], p.get('omega_q', 1.0), L, p.get('g', 1.0))


def _battery(L, p):
    return sc.battery_steady_state(p['E1'], p['E0'], p['Em1'], p['beta_H0'], p['beta_C0'],
                                   L, p.get('rates'))


def _parallel(L, p):
    J1 = p.get('gamma0', 1.0) * p.get('omega_q', 1.0)
    return sc.ScenarioResult(scenario='parallel', L=L, current=-L * J1,
                             parallel_baseline=L * J1)


FAMILIES: Dict[str, Callable] = {
    'mbody': _mbody,
    'superradiance': _superradiance,
    'superabsorption': _superabsorption,
    'engine': _engine,
    'battery': _battery,
    'parallel': _parallel,
}

# quantity swept for families whose headline number is not a heat current
VALUE_OF = {
    'battery': lambda r: r.advantage,
    'engine': lambda r: abs(r.power),
}


@dataclass
class ScalingReport:
    scenario: str
    samples: List[Tuple[int, float, Optional[float], Optional[float], Optional[float]]]
    fitted_exponent: float
    fit_intercept: float
    fit_r2: float
    fit_range: Tuple[int, int]
    bound_exponents: Dict[str, float] = field(default_factory=dict)
    results: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        Ls = [s[0] for s in self.samples]
        if Ls != sorted(Ls):
            raise ValueError("samples must be sorted by L")
        for s in self.samples:
            for v in s[1:]:
                if v is not None and not (np.isfinite(v) and v >= 0):
                    raise ValueError(f"invalid sample value {v} at L={s[0]}")
        if not 0.0 <= self.fit_r2 <= 1.0:
            raise ValueError("fit_r2 outside [0, 1]")

    @property
    def L_values(self):
        return [s[0] for s in self.samples]

    @property
    def values(self):
        return [s[1] for s in self.samples]


def _thread_cap(n):
    env = os.environ.get('HEATLAB_THREADS')
    cap = int(env) if env else (os.cpu_count() or 1)
    if cap < 1:
        raise ValueError("HEATLAB_THREADS must be a positive integer")
    return max(1, min(cap, n))


def sweep(family, L_values, params=None, threads=None):
    """Run ``family`` at each L and fit the exponent of the swept value.

    Per-L runs are independent and may execute concurrently (capped by
    ``HEATLAB_THREADS``); results are collected in L order.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown scenario family {family!r}; choose from {sorted(FAMILIES)}")
    Ls = sorted({int(L) for L in L_values})
    if len(Ls) < 3:
        raise ValueError("a sweep needs at least 3 distinct L values")
    params = dict(params or {})
    fn = FAMILIES[family]

    def one(L):
        try:
            return fn(L, params)
        except Exception as exc:
            raise SweepError(L, exc) from exc

    n_threads = threads or _thread_cap(len(Ls))
    if n_threads == 1:
        results = [one(L) for L in Ls]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(one, Ls))

    value = VALUE_OF.get(family, lambda r: abs(r.current))
    samples = []
    for r in results:
        L, _, b1, b2, par = r.sample()
        samples.append((L, float(value(r)), b1, b2, par))
    k, c, r2 = fit_exponent([(s[0], s[1]) for s in samples])
    bound_exps = {}
    for name, col in (('bound1', 2), ('bound2', 3), ('parallel', 4)):
        vals = [(s[0], s[col]) for s in samples]
        if all(v is not None and v > 0 for _, v in vals):
            bound_exps[name] = fit_exponent(vals)[0]
    return ScalingReport(family, samples, k, c, r2, (Ls[0], Ls[-1]), bound_exps, results)
