import math

import numpy as np
import pytest

from sgi_nanorotor.domain.analytic_model.error import GridMismatchError, UnboundedTrajectoryError
from sgi_nanorotor.domain.analytic_model.service import (
    analytic_com,
    analytic_com_velocity,
    delta_alpha_gamma,
    delta_beta_initial,
    libration_amplitude,
    max_superposition,
    mismatch_estimates,
    small_angle_libration,
    torque_balance,
    zero_point_table,
    zero_point_y0,
)
from sgi_nanorotor.domain.dynamics.dto import IntegrationOptions
from sgi_nanorotor.domain.dynamics.service import integrate_branch, run_interferometer
from sgi_nanorotor.domain.params.service import (
    closure_time,
    derived_trap_frequency,
    with_eta,
    with_mass,
    with_omega0,
)

OMEGA_TRAP = math.sqrt(12.08)


def _with_setup(config, setup, **update):
    return config.model_copy(update={"setup": setup, **update})


def _with_stride(config, stride):
    return config.model_copy(update={"output": config.output.model_copy(update={"stride": stride})})


class TestAnalyticCom:
    def test_starts_at_initial_position(self, default_config):
        x, y = analytic_com(0.0, 1, default_config.setup)
        assert x == pytest.approx(0.0, abs=1e-20)
        assert y == pytest.approx(1e-9, rel=1e-12)

    def test_returns_after_one_loop(self, default_config):
        setup = default_config.setup
        t_close = closure_time(default_config)
        for spin in (1, -1):
            x, y = analytic_com(t_close, spin, setup)
            assert x == pytest.approx(0.0, abs=1e-18)
            assert y == pytest.approx(1e-9, rel=1e-9)

    def test_half_loop_split(self, default_config):
        setup = default_config.setup
        half = math.pi / derived_trap_frequency(setup)
        x_plus, _ = analytic_com(half, 1, setup)
        x_minus, _ = analytic_com(half, -1, setup)
        assert abs(x_plus - x_minus) == pytest.approx(2.148e-7, rel=2e-3)

    def test_velocity_is_derivative(self, default_config):
        setup = default_config.setup
        t, h = 3e-3, 1e-7
        x_after, y_after = analytic_com(t + h, -1, setup)
        x_before, y_before = analytic_com(t - h, -1, setup)
        vx, vy = analytic_com_velocity(t, -1, setup)
        assert vx == pytest.approx((x_after - x_before) / (2 * h), rel=1e-6)
        assert vy == pytest.approx((y_after - y_before) / (2 * h), rel=1e-6)

    def test_no_trap_is_unbounded(self, default_config):
        with pytest.raises(UnboundedTrajectoryError):
            analytic_com(0.0, 1, with_eta(default_config.setup, 0.0))

    @pytest.mark.parametrize("spin", [1, -1])
    def test_matches_frozen_beta_integration(self, default_config, spin):
        setup = default_config.setup
        trajectory = integrate_branch(default_config, spin, IntegrationOptions(freeze_beta=True))
        assert len(trajectory.t) >= 100
        x, y = analytic_com(trajectory.t, spin, setup)
        vx, vy = analytic_com_velocity(trajectory.t, spin, setup)
        speed = derived_trap_frequency(setup) * np.max(np.abs(x))
        np.testing.assert_allclose(trajectory.x, x, rtol=0, atol=1e-6 * np.max(np.abs(x)))
        np.testing.assert_allclose(trajectory.y, y, rtol=0, atol=1e-6 * np.max(np.abs(y)))
        np.testing.assert_allclose(trajectory.vx, vx, rtol=0, atol=1e-6 * speed)


class TestMaxSuperposition:
    def test_reference_value(self, default_config):
        assert max_superposition(default_config.setup) == pytest.approx(2.148e-7, rel=2e-3)

    def test_tilt_factor(self, default_config):
        setup = default_config.setup
        flat = max_superposition(setup, beta0=0.0)
        assert max_superposition(setup, beta0=0.5) == pytest.approx(flat * math.sqrt(1.25), rel=1e-12)

    def test_inverse_in_mass(self, default_config):
        setup = default_config.setup
        assert max_superposition(with_mass(setup, 1e-16)) == pytest.approx(
            max_superposition(setup) / 10, rel=1e-12
        )

    def test_inverse_in_gradient(self, default_config):
        setup = default_config.setup
        assert max_superposition(with_eta(setup, -14000.0)) == pytest.approx(
            max_superposition(setup) / 2, rel=1e-12
        )

    def test_no_trap(self, default_config):
        with pytest.raises(UnboundedTrajectoryError):
            max_superposition(with_eta(default_config.setup, 0.0))


class TestLibration:
    def test_equilibrium_shift(self, default_config):
        setup = default_config.setup
        plus = libration_amplitude(1, setup)
        minus = libration_amplitude(-1, setup)
        assert plus.beta_bar - 1e-3 == pytest.approx(6.25e-5, rel=2e-3)
        assert minus.beta_bar - 1e-3 == pytest.approx(-(plus.beta_bar - 1e-3), rel=1e-12)
        assert plus.a_beta == pytest.approx(1e-3 - plus.beta_bar, rel=1e-12)
        assert plus.omega_eff == pytest.approx(setup.initial.omega0, rel=1e-15)

    def test_starts_at_beta0(self, default_config):
        for spin in (1, -1):
            for exact in (False, True):
                beta = small_angle_libration(0.0, spin, default_config.setup, exact_frequency=exact)
                assert beta == pytest.approx(1e-3, rel=1e-12)

    def test_exact_frequency_shift(self, default_config):
        setup = default_config.setup
        exact = libration_amplitude(1, setup, exact_frequency=True)
        shift = setup.mu * 0.14 / setup.moment_of_inertia
        assert exact.omega_eff**2 == pytest.approx(setup.initial.omega0**2 - shift, rel=1e-6)

    @pytest.mark.parametrize("spin", [1, -1])
    @pytest.mark.parametrize("exact", [False, True])
    def test_matches_integration_over_one_spin_period(self, default_config, spin, exact):
        setup = with_mass(default_config.setup, 1e-16)
        period = 2 * math.pi / setup.initial.omega0
        config = _with_stride(_with_setup(default_config, setup, t_close=period), 1)
        trajectory = integrate_branch(config, spin)
        expected = small_angle_libration(trajectory.t, spin, setup, exact_frequency=exact)
        amplitude = abs(libration_amplitude(spin, setup).a_beta)
        assert np.max(np.abs(trajectory.beta - expected)) <= 0.1 * amplitude

    def test_torque_balance(self, default_config):
        assert torque_balance(default_config.setup) == pytest.approx(0.14e-3 - 7e-6, rel=1e-12)

    def test_initial_mismatch(self, default_config):
        setup = default_config.setup
        assert delta_beta_initial(setup) == pytest.approx(2.50e-4, rel=2e-3)
        faster = with_omega0(setup, 2 * setup.initial.omega0)
        assert delta_beta_initial(faster) == pytest.approx(delta_beta_initial(setup) / 4, rel=1e-12)


class TestMismatchEstimates:
    def test_structure(self, default_config):
        setup = default_config.setup
        estimates = mismatch_estimates(setup, closure_time(default_config))
        assert estimates.delta_beta0 == delta_beta_initial(setup)
        assert estimates.delta_gamma == -estimates.delta_alpha
        assert estimates.delta_beta_close >= 0.0
        assert abs(estimates.delta_alpha) <= 0.126

    def test_scales_with_inertia(self, default_config):
        t_close = closure_time(default_config)
        light = mismatch_estimates(default_config.setup, t_close)
        heavy_setup = with_mass(default_config.setup, 1e-16)
        heavy = mismatch_estimates(heavy_setup, t_close)
        ratio = default_config.setup.moment_of_inertia / heavy_setup.moment_of_inertia
        assert heavy.delta_alpha == pytest.approx(light.delta_alpha * ratio, rel=1e-6)

    def test_heavy_rotor_matches_integration(self, default_config):
        setup = with_mass(default_config.setup, 1e-16)
        config = _with_stride(_with_setup(default_config, setup), 10**9)
        result = run_interferometer(config, threads=2)
        estimate = mismatch_estimates(setup, result.t_close)
        assert result.mismatches.delta_alpha_close == pytest.approx(estimate.delta_alpha, rel=0.1)


class TestDeltaAlphaGamma:
    def test_linear_growth_for_constant_offset(self):
        t = np.linspace(0.0, 1.0, 101)
        beta_minus = np.full_like(t, 1e-3)
        delta_alpha, delta_gamma = delta_alpha_gamma(t, beta_minus + 1e-5, beta_minus, 1e-3, 10.0)
        np.testing.assert_allclose(delta_alpha, 0.1 * t, rtol=1e-12, atol=1e-15)
        np.testing.assert_array_equal(delta_gamma, -delta_alpha)

    def test_length_mismatch(self):
        t = np.linspace(0.0, 1.0, 11)
        with pytest.raises(GridMismatchError):
            delta_alpha_gamma(t, np.zeros(11), np.zeros(10), 1e-3, 10.0)

    def test_grid_mismatch(self):
        t = np.linspace(0.0, 1.0, 11)
        with pytest.raises(GridMismatchError):
            delta_alpha_gamma(t, np.zeros(11), np.zeros(11), 1e-3, 10.0, t_minus=t * 1.01)


class TestZeroPoint:
    @pytest.mark.parametrize(
        "n, expected",
        [(0, 1.2317e-9), (10, 5.6444e-9), (100, 1.7462e-8)],
    )
    def test_reference_rows(self, n, expected):
        assert zero_point_y0(1e-17, OMEGA_TRAP, n) == pytest.approx(expected, rel=1e-4)

    def test_scaling(self):
        base = zero_point_y0(1e-17, OMEGA_TRAP)
        assert zero_point_y0(4e-17, OMEGA_TRAP) == pytest.approx(base / 2, rel=1e-12)
        assert zero_point_y0(1e-17, 4 * OMEGA_TRAP) == pytest.approx(base / 2, rel=1e-12)
        assert zero_point_y0(1e-17, OMEGA_TRAP, 4) == pytest.approx(base * 3, rel=1e-12)

    @pytest.mark.parametrize("omega, n", [(0.0, 0), (-1.0, 0), (OMEGA_TRAP, -1)])
    def test_rejects_bad_input(self, omega, n):
        with pytest.raises(ValueError):
            zero_point_y0(1e-17, omega, n)

    def test_table(self):
        rows = zero_point_table(1e-17, OMEGA_TRAP, [0, 10, 100])
        assert [row.occupation for row in rows] == [0, 10, 100]
        assert rows[0].y0 < rows[1].y0 < rows[2].y0
