from math import comb

import numpy as np
import pytest
from numpy.testing import assert_allclose

from heatlab.master import MasterEquation
from heatlab.numcore import hermitian_eig
from heatlab.scenarios import (RateNetwork, battery_dense_system, battery_network,
                               battery_product_indices, battery_steady_state, engine_closed_form,
                               engine_dense_system, engine_network, ergotropy_closed_form,
                               heat_engine_steady_state, mbody_current_closed_form,
                               mbody_simulate, rates_from_temperatures,
                               superabsorption_bound_analysis, superabsorption_delta_e,
                               superabsorption_spectrum, superradiance_closed_form,
                               superradiance_simulate)
from heatlab.scenarios.engine import effective_beta
from heatlab.thermo import heat_current

SPEC_RATES = {'H': (0.8, 0.2), 'C': (0.1, 0.9), 'W': (0.6, 0.4)}


class TestRateNetwork:
    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            RateNetwork({'a': np.array([[1.0, -1.0], [-1.0, 1.0]])}, [0, 1], ['0', '1'])

    def test_column_sums(self):
        with pytest.raises(ValueError, match="sum to zero"):
            RateNetwork({'a': np.array([[-1.0, 1.0], [2.0, -1.0]])}, [0, 1], ['0', '1'])

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            RateNetwork({'a': np.zeros((2, 2))}, [0, 1, 2], ['0', '1', '2'])

    def test_two_level_steady_state(self):
        net = RateNetwork({'a': np.array([[-2.0, 1.0], [2.0, -1.0]])}, [1, 0], ['e', 'g'])
        assert_allclose(net.steady_state(), [1 / 3, 2 / 3])
        assert net.residual() <= 1e-15

    def test_propagation_conserves(self):
        net = battery_network(0.5, 1.5, -0.5, 0.5, 2.0, 3)
        for p in net.evolve([0.0, 0.0, 1.0], np.linspace(0, 1, 5)):
            assert abs(p.sum() - 1) <= 1e-12
            assert np.all(p >= -1e-12)

    def test_all_zero(self):
        net = RateNetwork({'a': np.zeros((2, 2))}, [0, 1], ['0', '1'])
        with pytest.raises(ValueError):
            net.steady_state()


class TestMBody:
    def test_closed_form_examples(self):
        assert mbody_current_closed_form(4, 4, 0.5, 2.0) == pytest.approx(-64.0)
        assert mbody_current_closed_form(4, 1, 1.0, 1.0) == pytest.approx(-4.0)
        assert mbody_current_closed_form(1, 1, 1.0, 1.0) == pytest.approx(-1.0)

    def test_log_space_branch(self):
        L, m = 80, 7
        exact = -L * L * m / comb(L, m)
        assert mbody_current_closed_form(L, m, 1.0, 1.0) == pytest.approx(exact, rel=1e-12)

    def test_bad_m(self):
        with pytest.raises(ValueError):
            mbody_current_closed_form(3, 0, 1.0, 1.0)

    @pytest.mark.parametrize("m,expected", [(6, -216.0), (1, -6.0)])
    def test_simulation(self, m, expected):
        gamma, omega_q = 0.7, 1.3
        res = mbody_simulate(6, m, gamma, omega_q)
        assert res.current == pytest.approx(expected * gamma * omega_q, rel=1e-8)
        assert res.current == pytest.approx(res.closed_form, rel=1e-8)

    def test_collective_vs_parallel(self):
        res = mbody_simulate(2, 2, 1.0, 1.0)
        assert abs(res.current) == pytest.approx(8.0)
        assert res.parallel_baseline == pytest.approx(2.0)

    def test_gksl_agrees(self):
        a = mbody_simulate(4, 2, 1.0, 1.0, engine='redfield').current
        b = mbody_simulate(4, 2, 1.0, 1.0, engine='gksl').current
        assert a == pytest.approx(b, rel=1e-12)

    def test_coupling_independent(self):
        a = mbody_simulate(3, 3, 1.0, 1.0, g=1.0)
        b = mbody_simulate(3, 3, 1.0, 1.0, g=0.3)
        assert a.current == pytest.approx(b.current, rel=1e-12)
        assert a.bounds.bound1 == pytest.approx(b.bounds.bound1, rel=1e-12)

    def test_diagonal_noise(self):
        res = mbody_simulate(3, 1, 1.0, 1.0, noise_axis='z')
        assert res.current == 0
        assert res.bounds.bound2 == 0 and res.bounds.bound_commutator == 0

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            mbody_simulate(13, 1, 1.0, 1.0)


class TestSuperradiance:
    def test_closed_form(self):
        assert superradiance_closed_form(1, 1.0, 1.0) == -1.0
        assert superradiance_closed_form(3, 1.0, 1.0) == -4.0
        assert superradiance_closed_form(101, 1.0, 1.0) == -2601.0

    def test_even_rejected(self):
        with pytest.raises(ValueError):
            superradiance_closed_form(4, 1.0, 1.0)
        with pytest.raises(ValueError):
            superradiance_simulate(4, 1.0, 1.0)

    def test_ladder(self):
        assert superradiance_simulate(3, 1.0, 1.0).current == pytest.approx(-4.0, rel=1e-10)

    @pytest.mark.parametrize("L", [1, 3, 5, 9])
    def test_dense_matches_ladder(self, L):
        a = superradiance_simulate(L, 0.8, 1.1).current
        b = superradiance_simulate(L, 0.8, 1.1, engine='dense').current
        assert abs(a - b) <= 1e-9 * abs(a)

    @pytest.mark.parametrize("L", [3, 7, 21])
    def test_emitted_energy(self, L):
        omega_q = 1.5
        res = superradiance_simulate(L, 1.0, omega_q, cascade=True)
        assert res.emitted_energy == pytest.approx((L + 1) / 2 * omega_q, rel=1e-8)
        for p in res.trajectory.states:
            assert abs(p.sum() - 1) <= 1e-10

    def test_bounds_hold(self):
        rep = superradiance_simulate(11, 1.0, 1.0).bounds
        assert rep.ok
        assert rep.saturation_ratio_2 == pytest.approx(144 / (4 * 121))

    def test_unknown_engine(self):
        with pytest.raises(ValueError):
            superradiance_simulate(3, 1.0, 1.0, engine='fast')


class TestSuperabsorption:
    def test_delta_e(self):
        res = superabsorption_bound_analysis(5, 0.1, 1.0, 1.0)
        assert abs(res.delta_e - 1.4) <= 1e-10
        assert res.delta_e_expected == pytest.approx(1.4)

    def test_omega_zero(self):
        res = superabsorption_bound_analysis(5, 0.0, 1.0, 1.0)
        assert res.delta_e == pytest.approx(1.0)

    @pytest.mark.parametrize("L", [3, 5, 11])
    def test_absorption_current(self, L):
        res = superabsorption_bound_analysis(L, 0.1, 1.0, 1.0)
        assert res.current == pytest.approx((L + 1) ** 2 / 4, rel=1e-10)
        assert res.current == pytest.approx(res.closed_form, rel=1e-10)
        assert res.bounds.ok

    def test_bound2_value(self):
        res = superabsorption_bound_analysis(5, 0.1, 1.0, 1.0)
        # 2 xi dE ||A||^2 with xi = 1/2, ||A|| = L
        assert res.bounds.bound2 == pytest.approx(1.4 * 25)

    def test_spectrum(self):
        E = superabsorption_spectrum(3, 0.2, 1.0)
        ms = np.array([-1.5, -0.5, 0.5, 1.5])
        assert_allclose(E, np.sort(ms + 0.2 * ms ** 2))

    def test_delta_e_formula(self):
        assert superabsorption_delta_e(7, 0.25, 2.0) == pytest.approx(3.5)


class TestEngine:
    def test_symmetric_rates_no_power(self):
        rates = {a: (0.5, 0.5) for a in 'HCW'}
        res = heat_engine_steady_state(rates, 1.0, 4)
        assert abs(res.power) <= 1e-14
        assert res.power_closed_form == 0

    def test_closed_form_matches_numerics(self):
        res = heat_engine_steady_state(SPEC_RATES, 1.0, 4)
        p, P, _ = engine_closed_form(SPEC_RATES, 1.0, 4)
        assert_allclose(res.populations, p, rtol=1e-12)
        assert res.power == pytest.approx(P, rel=1e-12)
        assert res.power == pytest.approx(-6.4, rel=1e-12)
        assert_allclose([res.currents[a] for a in 'HCW'], [19.2, -25.6, 6.4], rtol=1e-12)

    def test_first_law(self):
        res = heat_engine_steady_state(SPEC_RATES, 1.0, 4)
        assert res.first_law_residual <= 1e-12

    def test_power_cubic(self):
        Ls = np.arange(2, 33)
        P = [abs(heat_engine_steady_state(SPEC_RATES, 1.0, int(L), with_bounds=False).power)
             for L in Ls]
        slope = np.polyfit(np.log(Ls), np.log(P), 1)[0]
        assert abs(slope - 3) <= 1e-6

    def test_efficiency_fixed_in_L(self):
        rates = rates_from_temperatures({'H': 1.0, 'C': 1.0, 'W': 1.0},
                                        {'H': 0.5, 'C': 2.0, 'W': 1.0}, 1.0)
        eta = [heat_engine_steady_state(rates, 1.0, L).efficiency for L in (2, 5, 11)]
        assert eta[0] is not None
        assert_allclose(eta, eta[0], rtol=1e-12)

    def test_effective_beta(self):
        assert effective_beta(np.exp(-2.0), 1.0, 2, 0.5) == pytest.approx(2.0)
        assert effective_beta(0.0, 1.0, 1, 1.0) == np.inf

    def test_default_w_temperature(self):
        rates = rates_from_temperatures({'H': 1.0, 'C': 1.0, 'W': 1.0}, {'H': 1.0, 'C': 3.0}, 1.0)
        up, down = rates['W']
        assert up / down == pytest.approx(np.exp(-1e-6))

    def test_missing_bath(self):
        with pytest.raises(ValueError):
            heat_engine_steady_state({'H': (1, 1), 'C': (1, 1)}, 1.0, 2)

    def test_negative_rate(self):
        with pytest.raises(ValueError):
            engine_network({'H': (1, -1), 'C': (1, 1), 'W': (1, 1)}, 1.0, 2)

    def test_all_zero(self):
        with pytest.raises(ValueError):
            engine_network({a: (0, 0) for a in 'HCW'}, 1.0, 2)

    @pytest.mark.parametrize("seed", range(10))
    def test_steady_second_law(self, seed):
        rng = np.random.default_rng(seed)
        beta0 = dict(zip('HCW', rng.uniform(-1, 3, 3)))
        rates = rates_from_temperatures(dict(zip('HCW', rng.uniform(0.1, 2, 3))), beta0, 1.0)
        res = heat_engine_steady_state(rates, 1.0, 3, with_bounds=False)
        flux = sum(res.betas[a] * res.currents[a] for a in 'HCW')
        assert flux <= 1e-12 * max(abs(J) for J in res.currents.values())
        assert res.entropy_production >= -1e-12

    def test_hot_work_bath_never_runs_engine(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            bH, bC = np.sort(rng.uniform(0.1, 3, 2))
            bW = rng.uniform(-3, bH)
            rates = rates_from_temperatures(dict(zip('HCW', rng.uniform(0.1, 2, 3))),
                                            {'H': bH, 'C': bC, 'W': bW}, 1.0)
            res = heat_engine_steady_state(rates, 1.0, 2, with_bounds=False)
            assert res.currents['W'] >= -1e-12
            assert res.thermo.regime != 'engine'

    def test_intermediate_work_bath_bound(self):
        rng = np.random.default_rng(5)
        hits = 0
        for _ in range(200):
            bH, bW, bC = np.sort(rng.uniform(0.1, 3, 3))
            rates = rates_from_temperatures(dict(zip('HCW', rng.uniform(0.1, 2, 3))),
                                            {'H': bH, 'C': bC, 'W': bW}, 1.0)
            res = heat_engine_steady_state(rates, 1.0, 2, with_bounds=False)
            if res.thermo.regime == 'engine' and res.efficiency is not None:
                hits += 1
                assert res.efficiency <= (bC - bH) / (bC - bW) + 1e-12
        assert hits > 0

    @pytest.mark.parametrize("L", [2, 3])
    def test_dense_gksl_matches_network(self, L):
        rates = rates_from_temperatures({'H': 1.0, 'C': 0.7, 'W': 0.4},
                                        {'H': 0.4, 'C': 1.5, 'W': -0.5}, 1.0)
        system = engine_dense_system(rates, 1.0, L)
        net = engine_network(rates, 1.0, L)
        eq = MasterEquation(system, 'gksl')
        p = np.array([0.3, 0.7])
        rho = np.zeros((2 ** L, 2 ** L))
        rho[0, 0], rho[-1, -1] = p
        for a, D in zip('HCW', eq.dissipators(rho)):
            assert_allclose(np.diag(D).real[[0, -1]], net.parts[a] @ p, rtol=1e-10, atol=1e-12)
            assert heat_current(system.hamiltonian, D) == pytest.approx(net.currents(p)[a],
                                                                        rel=1e-10)

    def test_bath_bounds_hold(self):
        res = heat_engine_steady_state(SPEC_RATES, 1.0, 4)
        for rep in res.bath_bounds.values():
            assert rep.ok


BATTERY = dict(E1=0.5, E0=1.5, Em1=-0.5, beta_H0=0.5, beta_C0=2.0)


class TestBattery:
    def test_ergotropy_closed_form(self):
        res = battery_steady_state(L=5, **BATTERY)
        e = np.e
        assert res.ergotropy_closed_form == pytest.approx(5 * (e ** 2 - e) / (1 + e ** 2 + e))
        assert abs(res.ergotropy - res.ergotropy_closed_form) <= 1e-12 * res.ergotropy

    def test_steady_populations(self):
        res = battery_steady_state(L=3, **BATTERY)
        w = np.array([np.exp(2.0), 1.0, np.exp(1.0)])
        assert_allclose(res.populations, w / w.sum(), rtol=1e-12)

    def test_no_inversion(self):
        res = battery_steady_state(0.5, 1.5, -0.5, 1.0, 2.0, 4)
        assert res.ergotropy == 0
        assert res.notes

    @pytest.mark.parametrize("L", [2, 5, 8])
    def test_time_ratio(self, L):
        res = battery_steady_state(L=L, **BATTERY)
        assert res.time_ratio == pytest.approx(L ** 2, rel=1e-9)
        assert res.advantage == pytest.approx(L ** 2, rel=1e-9)
        assert res.parallel_ergotropy == pytest.approx(res.ergotropy, rel=1e-12)

    def test_invalid_levels(self):
        with pytest.raises(ValueError):
            battery_steady_state(2.0, 1.5, -0.5, 0.5, 2.0, 2)

    @pytest.mark.parametrize("L", [1, 2, 3])
    def test_dense_gksl_matches_network(self, L):
        rates = {'H': 0.8, 'C': 1.3}
        system = battery_dense_system(L=L, rates=rates, **BATTERY)
        net = battery_network(L=L, rates=rates, **BATTERY)
        idx = battery_product_indices(L)
        eq = MasterEquation(system, 'gksl')
        p = np.array([0.2, 0.5, 0.3])
        rho = np.zeros((3 ** L, 3 ** L))
        rho[idx, idx] = p
        for a, D in zip('HC', eq.dissipators(rho)):
            assert_allclose(np.diag(D).real[idx], net.parts[a] @ p, rtol=1e-10, atol=1e-12)
        assert_allclose(np.sort(hermitian_eig(system.hamiltonian).eigenvalues)[[0, -1]],
                        [L * -0.5, L * 1.5])

    def test_closed_form_function(self):
        assert ergotropy_closed_form(L=1, **BATTERY) == pytest.approx(
            (np.e ** 2 - np.e) / (1 + np.e ** 2 + np.e))


class TestSuperabsorptionDegenerate:
    def test_symmetric_spectrum_noted(self):
        # Omega = omega_q: |-1/2> -> |-3/2> also absorbs at -omega_q
        res = superabsorption_bound_analysis(5, 1.0, 1.0, 1.0)
        assert res.current == pytest.approx(9 + 8)
        assert res.notes

    def test_generic_omega_clean(self):
        res = superabsorption_bound_analysis(5, 0.3, 1.0, 1.0)
        assert not res.notes
