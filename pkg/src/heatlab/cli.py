"""
Command-line entry point.

::

    heatlab <command> [--config FILE] [--set key=value]... [--out PATH] [--format csv|json]

Commands are ``scenario``, ``sweep``, ``evolve`` and ``bounds``. The config
file is a flat JSON object; ``--set`` flags (and bare ``key=value`` tokens)
override it, and a bare word names the scenario. Exit status is 0 when every
invariant and bound check passed, 1 when one failed (the report is still
written), and 2 for invalid input or a failed run.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from . import scenarios as sc
from . import spectral
from .bounds import check_bounds
from .master import (DickeLadder, MasterEquation, evolve, evolve_ladder, ladder_derivative,
                     ladder_rates)
from .numcore import PositivityError, pure_state
from .operators import dicke_state
from .scaling import sweep
from .thermo import entropy_production_rate, first_law_residual, work_bath_efficiency_bound

log = logging.getLogger(__name__)

COMMANDS = ('scenario', 'sweep', 'evolve', 'bounds')
FORMATS = ('csv', 'json')
SECOND_LAW_SLACK = 1e-9
FIRST_LAW_SLACK = 1e-9

INT_KEYS = {'L', 'save_every'}
FLOAT_KEYS = {'g', 'gamma0', 'omega_q', 'Omega', 'E1', 'E0', 'Em1', 'beta_H0', 'beta_C0',
              'beta_W0', 'gamma_H', 'gamma_C', 'gamma_W', 'dt', 't_final', 'xi_override',
              'element_tol', 'positivity_tol'}
PAIR_KEYS = {'rates_H', 'rates_C', 'rates_W'}
CHOICE_KEYS = {
    'scenario': sc.SCENARIOS,
    'engine': ('redfield', 'gksl', 'ladder', 'dense'),
    'noise_axis': ('x', 'z'),
}
NONNEGATIVE = {'gamma0', 'Omega', 'gamma_H', 'gamma_C', 'gamma_W', 'dt', 't_final',
               'xi_override', 'element_tol', 'positivity_tol'}
KNOWN_KEYS = INT_KEYS | FLOAT_KEYS | PAIR_KEYS | set(CHOICE_KEYS) | {'m', 'L_list'}

REQUIRED = {
    'mbody': ('L', 'm', 'gamma0', 'omega_q'),
    'superradiance': ('L', 'gamma0', 'omega_q'),
    'superabsorption': ('L', 'Omega', 'gamma0', 'omega_q'),
    'engine': ('L', 'omega_q'),
    'battery': ('L', 'E1', 'E0', 'Em1', 'beta_H0', 'beta_C0'),
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    scenario: str
    params: Dict[str, Any] = field(default_factory=dict)
    out: Optional[str] = None
    format: str = 'json'

    def get(self, key, default=None):
        return self.params.get(key, default)

    def echo(self):
        return {'command': self.command, 'scenario': self.scenario, **self.params}


# --- parsing ------------------------------------------------------------------

def _parse_L_list(value):
    if isinstance(value, list):
        return value
    if isinstance(value, str):
        text = value.strip()
        step = 1
        if ':' in text:
            text, s = text.split(':', 1)
            step = int(s)
        if '..' in text:
            lo, hi = (int(x) for x in text.split('..', 1))
            return list(range(lo, hi + 1, step))
        return [int(x) for x in text.split(',') if x.strip()]
    raise ConfigError(f"L_list must be a list or a range like '2..10', got {value!r}")


def _coerce(key, value):
    if key in INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return value
    if key in FLOAT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        return float(value)
    if key in PAIR_KEYS:
        if (not isinstance(value, list) or len(value) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
            raise ConfigError(f"{key} must be a pair [up, down] of numbers, got {value!r}")
        if any(v < 0 for v in value):
            raise ConfigError(f"{key} rates must be nonnegative")
        return [float(v) for v in value]
    if key in CHOICE_KEYS:
        if value not in CHOICE_KEYS[key]:
            raise ConfigError(f"{key} must be one of {CHOICE_KEYS[key]}, got {value!r}")
        return value
    if key == 'm':
        if value == 'L':
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"m must be an integer or 'L', got {value!r}")
        return value
    if key == 'L_list':
        Ls = _parse_L_list(value)
        if any(isinstance(L, bool) or not isinstance(L, int) or L < 1 for L in Ls):
            raise ConfigError(f"L_list entries must be positive integers, got {Ls!r}")
        return Ls
    raise ConfigError(f"unknown key {key!r}")


def _parse_value(text):
    if text.startswith('[') or text.startswith('{'):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"cannot parse value {text!r}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _split_assignment(token):
    if '=' not in token:
        raise ConfigError(f"expected key=value, got {token!r}")
    key, value = token.split('=', 1)
    return key.strip(), _parse_value(value.strip())


def parse_config(command, config_file=None, assignments=(), positional=(), out=None,
                 fmt='json'):
    """Merge a JSON config file with inline overrides and validate the result.

    ``assignments`` are ``key=value`` strings (later ones win), and
    ``positional`` holds bare tokens: a scenario name or more assignments.
    """
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; choose from {COMMANDS}")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    raw: Dict[str, Any] = {}
    if config_file is not None:
        path = Path(config_file)
        if not path.exists():
            raise ConfigError(f"config file {config_file} does not exist")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        data.pop('command', None)
        raw.update(data)
    inline = []
    for tok in positional:
        if '=' in tok:
            inline.append(tok)
        elif tok in sc.SCENARIOS:
            raw['scenario'] = tok
        else:
            raise ConfigError(f"unexpected argument {tok!r}")
    inline.extend(assignments)
    for tok in inline:
        key, value = _split_assignment(tok)
        raw[key] = value

    if command == 'sweep' and 'L' in raw and 'L_list' not in raw:
        # `L=2..10` on a sweep names the list of particle counts
        raw['L_list'] = raw.pop('L')

    unknown = sorted(set(raw) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    params = {k: _coerce(k, v) for k, v in raw.items()}
    for k in NONNEGATIVE & set(params):
        if params[k] < 0:
            raise ConfigError(f"{k} must be nonnegative, got {params[k]}")
    scenario = params.pop('scenario', None)
    if scenario is None:
        raise ConfigError("missing required key 'scenario'")

    required = list(REQUIRED[scenario])
    if command == 'sweep':
        required = ['L_list' if k == 'L' else k for k in required]
    if command == 'evolve':
        required.append('t_final')
    if scenario == 'engine':
        if not all(k in params for k in PAIR_KEYS) and not all(
                k in params for k in ('beta_H0', 'beta_C0')):
            required.extend(k for k in ('rates_H', 'rates_C', 'rates_W') if k not in params)
    missing = [k for k in required if k not in params]
    if missing:
        raise ConfigError(f"missing required key(s) for {scenario}: {', '.join(missing)}")
    if params.get('m') == 'L' and command != 'sweep':
        params['m'] = params['L']
    if isinstance(params.get('L'), int) and params['L'] < 1:
        raise ConfigError("L must be a positive integer")
    return RunConfig(command, scenario, params, out, fmt)


# --- scenario plumbing -------------------------------------------------------

def _with_xi(system, xi):
    if xi is None:
        return system
    baths = []
    for bath in system.baths:
        chans = [(A, spectral.SpectralModel(m.kind, m.gamma0, m.beta, m.window, xi))
                 for A, m in bath.channels]
        baths.append(spectral.BathSpec(bath.label, bath.beta, chans))
    return spectral.SystemSpec(system.hamiltonian, baths)


def _engine_rates(cfg):
    if all(k in cfg.params for k in PAIR_KEYS):
        return {a: tuple(cfg.params[f'rates_{a}']) for a in sc.engine.BATHS}
    down = {a: cfg.get(f'gamma_{a}', 1.0) for a in sc.engine.BATHS}
    beta0 = {'H': cfg.params['beta_H0'], 'C': cfg.params['beta_C0']}
    if 'beta_W0' in cfg.params:
        beta0['W'] = cfg.params['beta_W0']
    return sc.rates_from_temperatures(down, beta0, cfg.params['omega_q'])


def _battery_rates(cfg):
    return {'H': cfg.get('gamma_H', 1.0), 'C': cfg.get('gamma_C', 1.0)}


def _single_bath_system(cfg, L):
    """System used to evaluate bounds for the single-bath scenarios."""
    p = cfg.params
    g = p.get('g', 1.0)
    if cfg.scenario == 'mbody':
        return sc.mbody_system(L, p['m'] if p['m'] != 'L' else L, p['gamma0'], p['omega_q'],
                               g, p.get('noise_axis', 'x'))
    if cfg.scenario == 'superradiance':
        return sc.superradiance_system(L, p['gamma0'], p['omega_q'], g, 'ladder')
    if cfg.scenario == 'superabsorption':
        return sc.superabsorption_system(L, p['Omega'], p['omega_q'], p['gamma0'], g)
    raise ConfigError(f"no single-bath system for scenario {cfg.scenario!r}")


def _diagonal_sigma(p, dp, J, beta):
    lp = np.log(np.maximum(p, 1e-14))
    dS = float(-np.sum(dp * lp))
    if math.isinf(beta):
        flux = 0.0 if J == 0 else math.copysign(math.inf, beta * J)
    else:
        flux = beta * J
    return dS - flux


def _scenario_sections(cfg):
    """Run one scenario; returns (currents, bounds, thermo, notes, failures)."""
    p = cfg.params
    L = p['L']
    g = p.get('g', 1.0)
    notes: List[str] = []
    failures: List[str] = []
    thermo: Dict[str, Any] = {}
    xi = p.get('xi_override')
    tol = p.get('element_tol')

    if cfg.scenario in ('mbody', 'superradiance', 'superabsorption'):
        system = _with_xi(_single_bath_system(cfg, L), xi)
        if cfg.scenario == 'mbody':
            engine = p.get('engine', 'redfield')
            if engine not in ('redfield', 'gksl'):
                raise ConfigError("mbody needs engine 'redfield' or 'gksl'")
            res = sc.mbody_simulate(L, p['m'], p['gamma0'], p['omega_q'], g, engine=engine,
                                    with_bounds=False, noise_axis=p.get('noise_axis', 'x'))
            eq = MasterEquation(system, 'redfield')
            rho = np.zeros((system.dim, system.dim))
            rho[0, 0] = 1.0
            pvec, dp = np.diag(rho), np.real(np.diag(eq.dissipator(0, rho)))
            if not g:
                notes.append("zero coupling: no heat flows and all bounds vanish")
        elif cfg.scenario == 'superradiance':
            engine = p.get('engine', 'ladder')
            engine = engine if engine in ('ladder', 'dense') else 'dense'
            res = sc.superradiance_simulate(L, p['gamma0'], p['omega_q'], engine=engine, g=g,
                                            with_bounds=False)
            lad = DickeLadder.dicke(L, 0.5, p['omega_q'])
            pvec = lad.populations
            dp = ladder_derivative(lad, p['gamma0'], 0.0)
        else:
            res = sc.superabsorption_bound_analysis(L, p['Omega'], p['omega_q'], p['gamma0'], g)
            thermo['delta_e'] = res.delta_e
            thermo['delta_e_expected'] = res.delta_e_expected
            notes.append(res.narrative)
            pvec = dp = None
        J = res.current
        rep = check_bounds(system.hamiltonian, system.baths[0], J, element_tol=tol,
                           strict=False)
        currents = {'J0': J, 'per_bath': {'B': J}, 'closed_form': res.closed_form,
                    'parallel_baseline': res.parallel_baseline}
        if res.closed_form is not None:
            scale = max(abs(res.closed_form), 1e-300)
            currents['closed_form_rel_error'] = abs(J - res.closed_form) / scale
        bounds = rep.as_dict()
        failures.extend(rep.violations)
        thermo['first_law_residual'] = None
        notes.append("single bath at t=0: the first law is a steady-state statement and "
                     "is not audited here")
        if pvec is not None:
            sigma = _diagonal_sigma(pvec, dp, J, system.baths[0].beta)
            thermo['entropy_production'] = sigma
            thermo['second_law_ok'] = bool(sigma >= -SECOND_LAW_SLACK)
            if not thermo['second_law_ok']:
                failures.append(f"entropy production {sigma} is negative")
        else:
            thermo['entropy_production'] = None
            notes.append("band-pass bath has no temperature; entropy production not evaluated")
        return currents, bounds, thermo, notes, failures

    if cfg.scenario == 'engine':
        res = sc.heat_engine_steady_state(_engine_rates(cfg), p['omega_q'], L, g, strict=False)
        currents = {'per_bath': res.currents, 'power': res.power,
                    'power_closed_form': res.power_closed_form,
                    'parallel_baseline': res.parallel_baseline,
                    'populations': list(res.populations)}
        bounds = {a: r.as_dict() for a, r in res.bath_bounds.items()}
        for r in res.bath_bounds.values():
            failures.extend(r.violations)
        th = res.thermo
        thermo = {'first_law_residual': res.first_law_residual,
                  'entropy_production': res.entropy_production,
                  'second_law_ok': bool(res.entropy_production >= -SECOND_LAW_SLACK),
                  'regime': th.regime, 'efficiency': th.efficiency,
                  'efficiency_closed_form': res.efficiency_closed_form,
                  'carnot_efficiency': th.carnot_efficiency,
                  'efficiency_deficit': res.efficiency_deficit, 'cop': th.cop,
                  'carnot_cop': th.carnot_cop, 'betas': res.betas,
                  'steady_residual': res.steady_residual}
        if res.first_law_residual > FIRST_LAW_SLACK:
            failures.append(f"first-law residual {res.first_law_residual}")
        if not thermo['second_law_ok']:
            failures.append("steady-state entropy production is negative")
        ceiling = work_bath_efficiency_bound(res.betas['H'], res.betas['C'], res.betas['W'])
        thermo['efficiency_ceiling'] = ceiling
        if (th.regime == 'engine' and th.efficiency is not None and ceiling is not None
                and th.efficiency > ceiling + 1e-12):
            failures.append("efficiency exceeds the second-law ceiling")
        return currents, bounds, thermo, list(res.notes), failures

    if cfg.scenario == 'battery':
        res = sc.battery_steady_state(p['E1'], p['E0'], p['Em1'], p['beta_H0'], p['beta_C0'],
                                      L, _battery_rates(cfg))
        currents = {'per_bath': res.currents, 'charging_power': res.current,
                    'parallel_baseline': res.parallel_baseline,
                    'populations': list(res.populations)}
        thermo = {'ergotropy': res.ergotropy,
                  'ergotropy_closed_form': res.ergotropy_closed_form,
                  'parallel_ergotropy': res.parallel_ergotropy,
                  'charging_time': res.charging_time,
                  'parallel_charging_time': res.parallel_charging_time,
                  'time_ratio': res.time_ratio, 'advantage': res.advantage,
                  'first_law_residual': first_law_residual(
                      list(res.currents.values()), floor=L ** 3 * (p['E0'] - p['Em1'])),
                  'steady_residual': res.steady_residual}
        return currents, None, thermo, list(res.notes), failures
    raise ConfigError(f"unknown scenario {cfg.scenario!r}")


# --- commands ----------------------------------------------------------------

def _report(cfg, currents, bounds, thermo, notes, scaling=None):
    rep = {'inputs': cfg.echo(), 'currents': currents, 'bounds': bounds, 'thermo': thermo,
           'notes': [spectral.XI_CONVENTION_NOTE] + list(notes)}
    if scaling is not None:
        rep['scaling'] = scaling
    return rep


def run_scenario(cfg):
    currents, bounds, thermo, notes, failures = _scenario_sections(cfg)
    rows = [{'key': k, 'value': v} for k, v in _flatten({'currents': currents,
                                                          'bounds': bounds,
                                                          'thermo': thermo}).items()]
    return _report(cfg, currents, bounds, thermo, notes + failures), rows, failures


def run_bounds(cfg):
    if cfg.scenario == 'battery':
        raise ConfigError("bounds are not defined for the battery scenario")
    currents, bounds, thermo, notes, failures = _scenario_sections(cfg)
    rows = [{'key': k, 'value': v} for k, v in _flatten({'bounds': bounds}).items()]
    return _report(cfg, currents, bounds, thermo, notes + failures), rows, failures


def _sweep_params(cfg):
    p = dict(cfg.params)
    p.pop('L_list')
    if cfg.scenario == 'mbody':
        p['gamma_wn'] = p['gamma0']
    if cfg.scenario == 'engine':
        p['rates'] = _engine_rates(cfg)
    if cfg.scenario == 'battery':
        p['rates'] = _battery_rates(cfg)
    return p


def run_sweep(cfg):
    rep = sweep(cfg.scenario, cfg.params['L_list'], _sweep_params(cfg))
    failures = []
    rows = []
    for (L, J, b1, b2, par), res in zip(rep.samples, rep.results):
        rows.append({'L': L, 'abs_current': J, 'bound1': b1, 'bound2': b2,
                     'parallel_baseline': par,
                     'saturation_ratio_1': J / b1 if b1 else None,
                     'saturation_ratio_2': J / b2 if b2 else None})
        if res.bounds is not None:
            failures.extend(f"L={L}: {v}" for v in res.bounds.violations)
    scaling = {'scenario': rep.scenario, 'fitted_exponent': rep.fitted_exponent,
               'fit_intercept': rep.fit_intercept, 'fit_r2': rep.fit_r2,
               'fit_range': list(rep.fit_range), 'bound_exponents': rep.bound_exponents,
               'samples': rows}
    currents = {'abs_current': {str(r['L']): r['abs_current'] for r in rows}}
    bounds = {'bound1': {str(r['L']): r['bound1'] for r in rows},
              'bound2': {str(r['L']): r['bound2'] for r in rows}}
    return _report(cfg, currents, bounds, {}, failures, scaling), rows, failures


def _evolve_dense(cfg, system, rho0, engine):
    p = cfg.params
    eq = MasterEquation(system, engine)
    dt = p.get('dt')
    save_every = p.get('save_every', 1)
    traj = evolve(eq, rho0, dt, p['t_final'], positivity_tol=p.get('positivity_tol', 1e-8),
                  save_every=save_every)
    labels = [b.label for b in system.baths]
    betas = [b.beta for b in system.baths]
    rows, failures = [], []
    H = system.hamiltonian
    for t, rho in traj:
        D = eq.dissipators(rho)
        J = [float(np.real(np.einsum('ij,ji->', H, d))) for d in D]
        drho = eq.derivative(t, rho)
        sigma = entropy_production_rate(rho, drho, J, betas)
        row = {'t': t, 'energy': float(np.real(np.trace(H @ rho)))}
        row.update({f'J_{lab}': j for lab, j in zip(labels, J)})
        row['J_total'] = sum(J)
        row['entropy_production'] = sigma
        row['min_eigenvalue'] = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
        rows.append(row)
        if engine == 'gksl' and sigma < -SECOND_LAW_SLACK:
            failures.append(f"negative entropy production {sigma} at t={t}")
    return rows, failures


def run_evolve(cfg):
    p = cfg.params
    L = p['L']
    g = p.get('g', 1.0)
    notes = []
    if cfg.scenario in ('mbody', 'superradiance', 'superabsorption'):
        engine = p.get('engine', 'gksl')
        if cfg.scenario == 'superradiance' and engine == 'ladder':
            lad = DickeLadder.dicke(L, 0.5, p['omega_q'])
            c2d, _ = ladder_rates(L)
            dt = p.get('dt', 0.05 / (p['gamma0'] * c2d.max()))
            traj = evolve_ladder(lad, p['gamma0'], 0.0, dt, p['t_final'],
                                 p.get('save_every', 1))
            rows = []
            for t, pop in traj:
                l2 = DickeLadder(L, np.clip(pop / pop.sum(), 0, None), p['omega_q'])
                J = float(l2.energies @ ladder_derivative(l2, p['gamma0'], 0.0))
                rows.append({'t': t, 'energy': l2.energy(), 'J_B': J})
            failures = []
        else:
            if engine not in ('redfield', 'gksl'):
                raise ConfigError("dense evolution needs engine 'redfield' or 'gksl'")
            if cfg.scenario == 'superradiance':
                system = sc.superradiance_system(L, p['gamma0'], p['omega_q'], g, 'dense')
                rho0 = pure_state(dicke_state(L, 0.5))
            elif cfg.scenario == 'mbody':
                system = _single_bath_system(cfg, L)
                rho0 = sc.mbody.mbody_initial_state(L)
            else:
                system = _single_bath_system(cfg, L)
                rho0 = np.zeros((L + 1, L + 1))
                rho0[(L + 1) // 2, (L + 1) // 2] = 1.0
            rows, failures = _evolve_dense(cfg, system, rho0, engine)
    elif cfg.scenario in ('engine', 'battery'):
        if cfg.scenario == 'engine':
            net = sc.engine_network(_engine_rates(cfg), p['omega_q'], L)
            p0 = np.array([0.0, 1.0])
        else:
            net = sc.battery_network(p['E1'], p['E0'], p['Em1'], p['beta_H0'], p['beta_C0'],
                                     L, _battery_rates(cfg))
            p0 = np.array([0.0, 0.0, 1.0])
        n = max(1, int(round(p['t_final'] / p.get('dt', p['t_final'] / 200))))
        times = np.linspace(0.0, p['t_final'], n + 1)
        rows = []
        for t, pop in zip(times, net.evolve(p0, times)):
            row = {'t': float(t)}
            row.update({f'p_{lab}': float(x) for lab, x in zip(net.state_labels, pop)})
            row.update({f'J_{a}': J for a, J in net.currents(pop).items()})
            if cfg.scenario == 'battery':
                row['ergotropy'] = sc.diagonal_ergotropy(net.energies, pop)
            rows.append(row)
        failures = []
    else:
        raise ConfigError(f"unknown scenario {cfg.scenario!r}")
    final = rows[-1]
    currents = {k: v for k, v in final.items() if k.startswith('J_')}
    thermo = {'min_entropy_production': min((r['entropy_production'] for r in rows
                                             if 'entropy_production' in r), default=None),
              'n_points': len(rows)}
    return _report(cfg, currents, {}, thermo, notes + failures), rows, failures


RUNNERS = {'scenario': run_scenario, 'sweep': run_sweep, 'evolve': run_evolve,
           'bounds': run_bounds}


def run(cfg: RunConfig):
    """Execute ``cfg``; returns ``(exit status, report, csv rows)`` and writes outputs."""
    report, rows, failures = RUNNERS[cfg.command](cfg)
    status = 1 if failures else 0
    report['exit_status'] = status
    _emit(cfg, report, rows)
    return status, report, rows


# --- serialisation -----------------------------------------------------------

def _flatten(obj, prefix=''):
    out = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(_flatten(v, f'{prefix}{k}.'))
    elif isinstance(obj, (list, tuple)) and obj and not isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            out[f'{prefix}{i}'] = v
    else:
        out[prefix.rstrip('.')] = obj
    return out


def format_float(x):
    if math.isnan(x):
        return 'NaN'
    if math.isinf(x):
        return 'Infinity' if x > 0 else '-Infinity'
    return format(x, '.17g')


def to_json(obj, indent=2, level=0):
    """JSON text with every float written to 17 significant digits."""
    pad = ' ' * (indent * (level + 1))
    end = ' ' * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return '{}'
        items = [f'{pad}{json.dumps(str(k))}: {to_json(v, indent, level + 1)}'
                 for k, v in obj.items()]
        return '{\n' + ',\n'.join(items) + '\n' + end + '}'
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return '[]'
        return '[' + ', '.join(to_json(v, indent, level + 1) for v in obj) + ']'
    if isinstance(obj, (bool, np.bool_)):
        return 'true' if obj else 'false'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if obj is None:
        return 'null'
    return json.dumps(str(obj))


def _csv_cell(v):
    if v is None:
        return ''
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    return str(v)


def to_csv(rows):
    if not rows:
        return ''
    cols = list(rows[0])
    for r in rows[1:]:
        cols.extend(k for k in r if k not in cols)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(cols)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _emit(cfg, report, rows):
    text_json = to_json(report) + '\n'
    if cfg.format == 'json':
        if cfg.out:
            Path(cfg.out).write_text(text_json)
        else:
            sys.stdout.write(text_json)
        return
    text_csv = to_csv(rows)
    if cfg.out:
        out = Path(cfg.out)
        out.write_text(text_csv)
        out.with_suffix('.json').write_text(text_json)
    else:
        sys.stdout.write(text_csv)


# --- entry point ---------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog='heatlab', description=__doc__.split('\n\n')[0].strip())
    ap.add_argument('command', choices=COMMANDS)
    ap.add_argument('tokens', nargs='*', help="scenario name and key=value overrides")
    ap.add_argument('--config', help="JSON config file")
    ap.add_argument('--set', dest='assignments', action='append', default=[],
                    metavar='KEY=VALUE', help="override one config key (repeatable)")
    ap.add_argument('--out', help="output path (default: standard output)")
    ap.add_argument('--format', choices=FORMATS, default='json')
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.command, args.config, args.assignments, args.tokens,
                           args.out, args.format)
        status, _, _ = run(cfg)
    except (ConfigError, PositivityError, ValueError, RuntimeError) as exc:
        print(f"heatlab: error: {exc}", file=sys.stderr)
        return 2
    if status:
        print("heatlab: one or more invariant or bound checks failed; see report",
              file=sys.stderr)
    return status


if __name__ == '__main__':
    sys.exit(main())
