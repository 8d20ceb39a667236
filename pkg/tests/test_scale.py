import math
import warnings

import numpy as np
import pytest

from dividend_opt import (ClaimModel, DomainTooShortError, LodeOperatorSpec,
                          ModelParams, NumericsError, OverflowDomainError,
                          PenaltyModel, PremiumModel,
                          closed_form_G_ruin_constant, closed_form_W_constant,
                          closed_form_W_linear, compute_G, compute_W,
                          solve_scale)
from conftest import make_params


class TestComputeW:
    def test_value_and_slope_at_zero(self, table1_q05):
        W = compute_W(table1_q05, 0.01, 10.0)
        assert W.values[0] == 1.0
        # slope at zero is (lam+q)/p(0)
        assert W.derivative_values[0] == pytest.approx(0.15, rel=1e-14)

    def test_constant_premium_vs_two_exponential(self):
        params = make_params(premium="constant")
        W = compute_W(params, 0.005, 20.0)
        xs = np.linspace(0.0, 20.0, 81)
        ref = closed_form_W_constant(params, xs)
        rel = np.max(np.abs(W(xs) - ref) / np.abs(ref))
        assert rel < 1e-5

    def test_linear_premium_vs_kummer(self, table1_q05):
        W = compute_W(table1_q05, 0.005, 30.0)
        xs = np.linspace(0.0, 30.0, 121)
        ref = closed_form_W_linear(table1_q05, xs)
        rel = np.max(np.abs(W(xs) - ref) / np.abs(ref))
        assert rel < 1e-4

    def test_positive_and_increasing(self):
        params = make_params(premium="rational", q=0.01)
        W = compute_W(params, 0.01, 40.0)
        assert np.all(W.values > 0)
        assert np.all(np.diff(W.values) > 0)

    def test_step_warning(self, table1_q05):
        with pytest.warns(UserWarning, match="recommended cap"):
            compute_W(table1_q05, 0.05, 5.0)

    def test_refinement_order_at_least_1_8(self):
        params = make_params(premium="constant")
        xs = np.linspace(0.0, 15.0, 31)
        ref = closed_form_W_constant(params, xs)
        errs = [np.max(np.abs(compute_W(params, dxv, 16.0)(xs) - ref))
                for dxv in (0.02, 0.01, 0.005)]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(orders) >= 1.8


class TestComputeG:
    def test_zero_penalty_gives_zero(self, table1_q05):
        G = compute_G(table1_q05, 0.01, 20.0)
        assert np.all(G.values == 0.0)
        assert np.all(G.derivative_values == 0.0)

    def test_classical_ruin_probability(self):
        params = make_params(premium="constant", penalty="constant", k=1.0, q=0.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # W' underflows far out at q=0
            G = compute_G(params, 0.0025, 100.0)
        xs = np.linspace(0.0, 20.0, 81)
        ref = closed_form_G_ruin_constant(params, xs)
        assert np.max(np.abs(G(xs) - ref)) < 1e-6
        assert G.values[0] == pytest.approx(-1.0 / 3.0, abs=1e-7)

    def test_nonpositive_for_nonpositive_penalty(self):
        for pen in ("constant", "linear"):
            params = make_params(penalty=pen)
            G = compute_G(params, 0.01, 40.0)
            assert np.all(G.values <= 1e-12)

    def test_gamma_is_G_at_zero(self):
        params = make_params(penalty="linear", k=1.0, beta=0.5)
        sol = solve_scale(params, 0.01, 50.0)
        assert sol.stable_coefficient == pytest.approx(float(sol.G.values[0]))

    def test_truncation_invariance(self):
        # +25% domain moves G on the first half by < 1e-6 * max|G|
        params = make_params(penalty="constant", k=1.0)
        g1 = compute_G(params, 0.01, 80.0)
        g2 = compute_G(params, 0.01, 100.0)
        xs = np.linspace(0.0, 40.0, 200)
        gmax = np.max(np.abs(g1.values))
        assert np.max(np.abs(g1(xs) - g2(xs))) < 1e-6 * gmax

    def test_domain_too_short_reported(self):
        params = make_params(penalty="constant", k=1.0)
        with pytest.raises(DomainTooShortError) as err:
            compute_G(params, 0.005, 3.0)
        assert err.value.suggested_x_max and err.value.suggested_x_max > 3.0

    def test_refinement_order_at_least_1_8(self):
        params = make_params(premium="constant", penalty="constant", k=1.0, q=0.0)
        xs = np.linspace(0.0, 15.0, 31)
        ref = closed_form_G_ruin_constant(params, xs)
        errs = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for dxv in (0.02, 0.01, 0.005):
                errs.append(np.max(np.abs(compute_G(params, dxv, 100.0)(xs) - ref)))
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(orders) >= 1.8


class TestDiagnostics:
    def test_residuals_tiny(self):
        params = make_params(penalty="linear", k=1.0, beta=0.5)
        sol = solve_scale(params, 0.005, 50.0)
        assert sol.diagnostics["residual_W"] < 1e-6
        assert sol.diagnostics["residual_G"] < 1e-6
        assert sol.diagnostics["W_prime_positive"]
        assert sol.diagnostics["one_minus_G_prime_positive"]

    def test_g_decay_diagnostic(self):
        params = make_params(penalty="constant", k=1.0)
        sol = solve_scale(params, 0.01, 60.0)
        absg = np.abs(sol.G.values)
        n = absg.size
        assert absg[int(0.9 * n):].max() <= absg[int(0.8 * n):int(0.9 * n)].max()

    def test_w_prime_violation_is_flagged_not_clipped(self):
        # q=0 constant premium: W' decays to ~0 and march noise flips its sign
        params = make_params(premium="constant", penalty="constant", k=1.0, q=0.0)
        with pytest.warns(UserWarning, match="W' <= 0"):
            sol = solve_scale(params, 0.005, 120.0)
        assert not sol.diagnostics["W_prime_positive"]
        assert "W_prime_first_violation_x" in sol.diagnostics
        # flagged, not clipped: negative samples survive
        assert np.min(sol.W.derivative_values) < 0


class TestRescaling:
    # growth rate ~ (lam+q)/c is huge for a small constant premium
    FAST = ModelParams(PremiumModel.constant(0.01), ClaimModel.exponential(0.5),
                       PenaltyModel.zero(), lam=5.0, q=1.0)

    def test_rescale_survives_within_float_range(self):
        W = compute_W(self.FAST, 0.001, 1.1)
        assert W.values[0] == 1.0
        assert np.all(np.isfinite(W.values))
        assert W.values[-1] > 1e150  # an internal rescale event must have fired

    def test_overflow_reports_largest_safe_domain(self):
        with pytest.raises(OverflowDomainError) as err:
            compute_W(self.FAST, 0.001, 2.0)
        safe = err.value.largest_safe_x_max
        assert safe is not None and 0.5 < safe < 2.0
        compute_W(self.FAST, 0.001, 0.95 * safe)  # reported bound is usable


class TestLodeOperatorSpec:
    def test_exponential_claim_structure(self):
        spec = LodeOperatorSpec.from_claim(ClaimModel.exponential(0.3))
        assert spec.m == 1
        assert spec.beta == (0.3,)
        assert spec.ode_order == 2
        assert spec.solver_available
        # L(v) = v + mu
        assert spec.char_poly(2.0) == pytest.approx(2.3)

    def test_higher_order_representable_not_executable(self):
        spec = LodeOperatorSpec(2, (0.25, 1.0))  # L(v) = v^2 + v + 0.25
        assert spec.ode_order == 3
        assert not spec.solver_available
        assert spec.char_poly(-0.5) == pytest.approx(0.0)

    def test_invalid_construction(self):
        with pytest.raises(ValueError):
            LodeOperatorSpec(0, ())
        with pytest.raises(ValueError):
            LodeOperatorSpec(2, (1.0,))


class TestTabulatedClaim:
    @staticmethod
    def discretized_exponential(mu=0.3, dx=0.02, end=50.0):
        ys = dx * np.arange(int(end / dx) + 1)
        f = mu * np.exp(-mu * ys)
        f /= np.trapezoid(f, dx=dx)
        return ClaimModel.tabulated(0.0, dx, f)

    def test_full_pipeline_matches_exponential(self):
        # discretizing the density must not move the located barrier much
        from dividend_opt import find_barrier

        exp_params = make_params(penalty="constant", k=1.0)
        tab_params = ModelParams(exp_params.premium, self.discretized_exponential(),
                                 exp_params.penalty, lam=0.1, q=0.05)
        a_exp = find_barrier(solve_scale(exp_params, 0.02, 60.0)).a_star
        a_tab = find_barrier(solve_scale(tab_params, 0.02, 60.0)).a_star
        assert a_tab == pytest.approx(a_exp, abs=0.3)

    def test_gerber_simulation_consistent(self):
        from dividend_opt import SimulationConfig, simulate_gerber_shiu

        exp_params = make_params(penalty="constant", k=1.0)
        tab_params = ModelParams(exp_params.premium, self.discretized_exponential(),
                                 exp_params.penalty, lam=0.1, q=0.05)
        config = SimulationConfig(paths=3000, horizon=250.0, seed=51)
        e1 = simulate_gerber_shiu(exp_params, 2.0, config)
        e2 = simulate_gerber_shiu(tab_params, 2.0, config)
        combined = math.hypot(e1.std_error, e2.std_error)
        assert abs(e1.mean - e2.mean) <= 4.0 * combined


class TestClosedFormLinear:
    def test_boundary_values(self, table1_q05):
        assert closed_form_W_linear(table1_q05, 0.0) == pytest.approx(1.0, rel=1e-12)
        h = 1e-6
        fd = (closed_form_W_linear(table1_q05, h)
              - closed_form_W_linear(table1_q05, 0.0)) / h
        assert fd == pytest.approx(0.15, rel=1e-5)

    def test_rejects_wrong_families(self):
        with pytest.raises(ValueError):
            closed_form_W_linear(make_params(premium="constant"), 1.0)
        with pytest.raises(ValueError):
            closed_form_W_linear(make_params(q=0.0, eps=0.0, premium="linear"), 1.0)

    def test_overflowing_parameters_reported(self):
        # c^((lam+q)/eps) far beyond float range must surface as a diagnosis
        params = make_params(c=40.0, eps=0.001)
        with pytest.raises(NumericsError, match="overflow"):
            closed_form_W_linear(params, 1.0)

    def test_integer_b_column(self):
        # q=0.04 makes b = (lam+q)/eps + 1 = 8 an integer; the terminating
        # U expansion must keep the closed form healthy
        params = make_params(q=0.04)
        W = compute_W(params, 0.005, 20.0)
        xs = np.linspace(0.0, 20.0, 41)
        ref = closed_form_W_linear(params, xs)
        assert np.max(np.abs(W(xs) - ref) / np.abs(ref)) < 1e-4
