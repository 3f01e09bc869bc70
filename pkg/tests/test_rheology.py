import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mudforce import (
    MudDirectionalParams,
    RheologyState,
    StepSizeError,
    builtin_params,
    heaviside_smooth,
    immediate_stress,
    sealing_factor,
    step_rheology,
    suction_closed_form,
    thixo_closed_form,
    thixo_exact,
    thixo_steady,
    total_stress,
    xi_steady,
)


def integrate_constant_rate(params, gamma_dot, t_end, dt):
    """Reference RK4 run of the thixotropy ODEs at constant rate, from the
    zero initial conditions of the closed-form solution (xi(0) = 0)."""
    state = RheologyState(xi=0.0)
    steps = round(t_end / dt)
    for _ in range(steps):
        state = step_rheology(state, 0.0, gamma_dot, 0.0, dt, params)
    return state


class TestParams:
    def test_builtin_row_is_valid(self, vertical_25):
        assert vertical_25.alpha == pytest.approx(0.024e6)
        assert vertical_25.n == 0.53
        assert vertical_25.sigma_y == pytest.approx(7100.0)

    @pytest.mark.parametrize(
        "override",
        [
            {"n": 1.2},
            {"n": 0.0},
            {"alpha": -1.0},
            {"lam": 0.0},
            {"eta_m": 1.0, "eta_inf": 2.0},
            {"tau_build": -0.1},
        ],
    )
    def test_invalid_values_rejected(self, vertical_25, override):
        import dataclasses

        with pytest.raises(ValueError):
            dataclasses.replace(vertical_25, **override)

    def test_default_k_r_puts_rest_time_constant_at_lambda(self, vertical_25):
        assert vertical_25.tau_xi(0.0) == pytest.approx(vertical_25.lam)
        assert vertical_25.k_a == pytest.approx(1.0 / vertical_25.lam)

    def test_yield_consistency_vertical_rows(self):
        # relative gaps of the derived vs. stored yield stress
        expected = {0.25: 0.045, 0.35: 0.019, 0.45: 0.035}
        for w, gap in expected.items():
            p = builtin_params(w, "vertical")
            assert p.yield_consistency() == pytest.approx(gap, abs=0.005)

    def test_yield_consistency_horizontal_rows_violated(self):
        # the horizontal rows break the relation by an order of magnitude
        p = builtin_params(0.25, "horizontal")
        assert p.yield_consistency() > 5.0


class TestSwitchAndSealing:
    def test_heaviside_midpoint(self):
        assert heaviside_smooth(0.0, 0.01) == 0.5

    def test_heaviside_deep_intrusion(self):
        nu = 0.02
        assert heaviside_smooth(10 * nu, nu) == pytest.approx(
            0.5 * (1 - math.tanh(10.0)), rel=1e-12
        )

    @given(st.floats(-50, 50), st.floats(1e-3, 10))
    def test_heaviside_partition_of_unity(self, gd, nu):
        assert heaviside_smooth(gd, nu) + heaviside_smooth(-gd, nu) == pytest.approx(1.0)

    def test_sealing_midpoint_and_limits(self):
        eps = 0.016
        g0 = 0.4
        assert sealing_factor(g0, g0, eps) == 0.5
        assert sealing_factor(g0 - 10 * eps, g0, eps) == pytest.approx(1.0, abs=1e-8)
        assert sealing_factor(g0 + 10 * eps, g0, eps) == pytest.approx(0.0, abs=1e-8)


class TestImmediateStress:
    def test_zero_and_unit(self, vertical_25):
        assert immediate_stress(0.0, vertical_25) == 0.0
        assert immediate_stress(1.0, vertical_25) == pytest.approx(vertical_25.alpha)

    def test_power_law_value(self, vertical_25):
        assert immediate_stress(0.5, vertical_25) == pytest.approx(
            0.024e6 * 0.5**0.53, rel=1e-12
        )
        assert immediate_stress(0.5, vertical_25) == pytest.approx(0.01663e6, rel=1e-3)

    def test_negative_gamma_rejected(self, vertical_25):
        with pytest.raises(ValueError):
            immediate_stress(-0.1, vertical_25)

    @given(st.floats(1e-6, 10.0), st.floats(1e-6, 10.0))
    def test_monotone_in_gamma(self, a, b):
        p = builtin_params(0.25, "vertical")
        lo, hi = sorted((a, b))
        assert immediate_stress(lo, p) <= immediate_stress(hi, p)


class TestSteadyStates:
    def test_xi_steady_values(self, vertical_25):
        assert xi_steady(0.0, vertical_25) == 1.0
        assert xi_steady(vertical_25.gamma_dot_c, vertical_25) == 0.5
        # 0.2 m/s over l_c = 0.065 m
        rate = 0.2 / 0.065
        assert xi_steady(rate, vertical_25) == pytest.approx(0.0435, abs=2e-4)

    def test_suction_steady_bounded(self, vertical_25):
        # 0 >= sigma_s,ss >= -sigma_y for any sealing state
        for gamma in [0.0, 0.2, 0.4, 0.6, 1.0]:
            ss = suction_closed_form(1e9, gamma, 0.4, vertical_25)
            assert -vertical_25.sigma_y - 1e-9 <= ss <= 0.0


class TestThixotropy:
    def test_zero_time(self, vertical_25):
        assert thixo_exact(0.0, 1.0, vertical_25) == 0.0
        assert thixo_closed_form(0.0, 1.0, vertical_25) == 0.0

    def test_long_time_limit(self, vertical_25):
        ss = thixo_steady(1.5, vertical_25)
        assert thixo_exact(100 * vertical_25.lam, 1.5, vertical_25) == pytest.approx(ss)
        assert thixo_closed_form(100 * vertical_25.lam, 1.5, vertical_25) == pytest.approx(ss)

    def test_closed_form_half_life(self, vertical_25):
        ss = thixo_steady(2.0, vertical_25)
        t_half = vertical_25.lam * math.log(2.0)
        assert thixo_closed_form(t_half, 2.0, vertical_25) == pytest.approx(ss / 2)

    def test_exact_matches_rk4(self, vertical_25):
        gd = 1.2
        dt = vertical_25.lam / 1000.0
        for t_end in (vertical_25.lam, 5 * vertical_25.lam):
            state = integrate_constant_rate(vertical_25, gd, t_end, dt)
            assert state.sigma_th == pytest.approx(
                thixo_exact(t_end, gd, vertical_25), rel=1e-5
            )

    def test_equal_time_constants_limit(self, vertical_25):
        import dataclasses

        # choose k_r so that tau_xi(gd) == lam exactly
        gd = 0.8
        p = dataclasses.replace(
            vertical_25,
            k_r=1.0 / (vertical_25.lam * (vertical_25.gamma_dot_c + gd)),
        )
        assert p.tau_xi(gd) == pytest.approx(p.lam, rel=1e-14)
        dt = p.lam / 1000.0
        state = integrate_constant_rate(p, gd, p.lam, dt)
        assert state.sigma_th == pytest.approx(thixo_exact(p.lam, gd, p), rel=1e-6)

    def test_removable_singularity_is_continuous(self, vertical_25):
        import dataclasses

        gd = 0.8
        k_star = 1.0 / (vertical_25.lam * (vertical_25.gamma_dot_c + gd))
        at = thixo_exact(1.0, gd, dataclasses.replace(vertical_25, k_r=k_star))
        near = thixo_exact(
            1.0, gd, dataclasses.replace(vertical_25, k_r=k_star * (1 + 1e-9))
        )
        assert near == pytest.approx(at, rel=1e-6)


class TestStepRheology:
    def test_step_size_guard(self, vertical_25):
        with pytest.raises(StepSizeError):
            step_rheology(RheologyState(), 0.0, 1.0, 0.0,
                          vertical_25.max_stable_dt() * 2, vertical_25)
        with pytest.raises(StepSizeError):
            step_rheology(RheologyState(), 0.0, 1.0, 0.0, -0.1, vertical_25)

    def test_rest_from_zero_state(self, vertical_25):
        state = RheologyState(xi=0.2)
        dt = vertical_25.default_dt()
        for _ in range(2000):
            state = step_rheology(state, 0.0, 0.0, 0.0, dt, vertical_25)
        assert state.sigma_th == 0.0
        # xi recovers toward 1 with time constant 1/k_a
        t = 2000 * dt
        expected = 1.0 - 0.8 * math.exp(-vertical_25.k_a * t)
        assert state.xi == pytest.approx(expected, rel=1e-6)

    def test_suction_converges_to_closed_form(self, vertical_25):
        p = vertical_25
        dt = p.default_dt()
        # enter retraction with some accumulated displacement, then hold gamma
        state = RheologyState()
        gamma = 0.5
        state = step_rheology(state, gamma, -1.0, 0.0, dt, p)
        assert state.retracting and state.gamma_0 == gamma
        for _ in range(int(60 * p.tau_build / dt)):
            state = step_rheology(state, gamma, -1.0, 0.0, dt, p)
        expected = suction_closed_form(1e9, gamma, gamma, p)
        assert state.sigma_s == pytest.approx(expected, rel=1e-4)

    def test_fourth_order_convergence(self, vertical_25):
        gd = 1.5
        t_end = vertical_25.lam
        errs = []
        for dt in (vertical_25.lam / 200, vertical_25.lam / 400):
            state = integrate_constant_rate(vertical_25, gd, t_end, dt)
            errs.append(abs(state.sigma_th - thixo_exact(t_end, gd, vertical_25)))
        assert errs[0] / errs[1] > 12.0  # ~16 for a 4th-order scheme

    @given(
        st.lists(st.floats(-5.0, 5.0), min_size=1, max_size=40),
    )
    @settings(max_examples=50, deadline=None)
    def test_xi_stays_in_unit_interval(self, rates):
        p = builtin_params(0.35, "vertical")
        state = RheologyState()
        dt = p.max_stable_dt() * 0.9
        gamma = 0.0
        for gd in rates:
            state = step_rheology(state, gamma, gd, 0.0, dt, p)
            gamma += abs(gd) * dt
            assert 0.0 <= state.xi <= 1.0
            assert state.sigma_s <= 0.0

    def test_sigma_s_zero_before_retraction(self, vertical_25):
        state = RheologyState()
        dt = vertical_25.default_dt()
        for _ in range(500):
            state = step_rheology(state, 0.3, 2.0, 0.0, dt, vertical_25)
        assert state.sigma_s == 0.0
        assert not state.retracting


class TestTotalStress:
    def test_zero_state(self, vertical_25):
        assert total_stress(RheologyState(), 0.0, 0.0, vertical_25) == 0.0

    def test_intrusion_suppresses_suction(self, vertical_25):
        state = RheologyState(sigma_th=100.0, sigma_s=-5000.0, retracting=True)
        fast = 50 * vertical_25.nu
        sigma = total_stress(state, 0.5, fast, vertical_25)
        expected = immediate_stress(0.5, vertical_25) + 100.0
        assert sigma == pytest.approx(expected, abs=1e-3)

    def test_retraction_admits_suction(self, vertical_25):
        state = RheologyState(sigma_th=100.0, sigma_s=-5000.0, retracting=True)
        fast = 50 * vertical_25.nu
        sigma = total_stress(state, 0.5, -fast, vertical_25)
        expected = immediate_stress(0.5, vertical_25) + 100.0 - 5000.0
        assert sigma == pytest.approx(expected, abs=1e-3)


class TestSuctionClosedForm:
    def test_fully_sealed_limit(self, vertical_25):
        p = vertical_25
        # deep below the onset displacement: phi ~ 1
        ss = suction_closed_form(1e9, 0.4 - 20 * p.epsilon, 0.4, p)
        assert ss == pytest.approx(-p.sigma_y, rel=1e-8)

    def test_broken_seal_gives_zero(self, vertical_25):
        p = vertical_25
        ss = suction_closed_form(1e9, 0.4 + 20 * p.epsilon, 0.4, p)
        assert ss == pytest.approx(0.0, abs=1e-8 * p.sigma_y)

    def test_half_sealed_steady_state(self, vertical_25):
        p = vertical_25
        a = 0.5 / p.tau_build + 0.5 / p.tau_leak
        expected = -0.5 * p.sigma_y / (a * p.tau_build)
        assert suction_closed_form(1e9, 0.4, 0.4, p) == pytest.approx(expected)
        assert expected == pytest.approx(-0.347 * p.sigma_y, rel=5e-3)
