"""Monte Carlo oracle: determinism, bias control, backend equivalence."""

import math

import numpy as np
import pytest

from fitval._kernels import BACKEND, MODE_CLIPPED, profit_pv_numpy
from fitval.core import MarketParams, ProjectParams
from fitval.errors import InvalidParametersError
from fitval.oracle import (
    SimConfig,
    comparative_statics_check,
    exercise_boundary_check,
    mc_project_value,
)
from fitval.thresholds import RegulatoryParams
from fitval.valuation import (
    Collar,
    FixedPremium,
    FixedPrice,
    Floor,
    project_value,
)

MARKET = MarketParams(mu=0.0, sigma=0.19, r=0.05)
PROJECT = ProjectParams(Q=5256.0, I=3_000_000.0)
CAP = 300_000.0 / 5256.0
COLLAR = Collar(F=25.0, C=CAP, T=15.0)

FAST = SimConfig(n_paths=20_000, steps_per_year=26, seed=123)


class TestDeterminism:
    def test_bit_identical_reruns(self):
        a = mc_project_value(COLLAR, 30.0, MARKET, PROJECT, FAST)
        b = mc_project_value(COLLAR, 30.0, MARKET, PROJECT, FAST)
        assert a == b

    def test_seed_changes_estimate(self):
        a = mc_project_value(COLLAR, 30.0, MARKET, PROJECT, FAST)
        other = SimConfig(n_paths=20_000, steps_per_year=26, seed=124)
        b = mc_project_value(COLLAR, 30.0, MARKET, PROJECT, other)
        assert a.mean != b.mean

    def test_path_count_prefix_property(self):
        # growing the sample keeps the batched estimate deterministic
        small = SimConfig(n_paths=8192, steps_per_year=26, seed=123)
        big = SimConfig(n_paths=16384, steps_per_year=26, seed=123)
        a = mc_project_value(COLLAR, 30.0, MARKET, PROJECT, small)
        b = mc_project_value(COLLAR, 30.0, MARKET, PROJECT, big)
        # same first batch, so the doubled run cannot drift arbitrarily far
        assert abs(a.mean - b.mean) < 6.0 * a.std_error

    def test_config_validation(self):
        with pytest.raises(InvalidParametersError):
            SimConfig(n_paths=10)
        with pytest.raises(InvalidParametersError):
            SimConfig(steps_per_year=1)
        with pytest.raises(InvalidParametersError):
            mc_project_value(COLLAR, 0.0, MARKET, PROJECT, FAST)


class TestAgreement:
    @pytest.mark.parametrize(
        "scheme",
        [
            FixedPrice(F=25.0, T=15.0),
            FixedPremium(F=25.0, T=15.0),
            Floor(F=25.0, T=15.0),
            COLLAR,
        ],
        ids=lambda s: s.label,
    )
    def test_within_three_se(self, scheme):
        est = mc_project_value(scheme, 30.0, MARKET, PROJECT, FAST)
        analytic = project_value(scheme, 30.0, MARKET, PROJECT).value
        assert abs(analytic - est.mean) < 3.0 * est.std_error

    def test_fixed_price_deterministic_leg(self):
        # with a fixed tariff the only randomness is the terminal price, so
        # subtracting the analytic tail must leave the annuity exactly
        scheme = FixedPrice(F=25.0, T=10.0)
        cfg = SimConfig(n_paths=2000, steps_per_year=12, seed=5)
        est = mc_project_value(scheme, 30.0, MARKET, PROJECT, cfg)
        annuity = 25.0 * PROJECT.Q / MARKET.r * (1.0 - math.exp(-MARKET.r * 10.0))
        # annuity part carries only trapezoid error of the discount curve
        n_steps = 120
        dt = 10.0 / n_steps
        t = np.arange(n_steps + 1) * dt
        w = np.full(n_steps + 1, dt)
        w[0] = w[-1] = dt / 2
        trap = float(25.0 * PROJECT.Q * (w @ np.exp(-MARKET.r * t)))
        assert trap == pytest.approx(annuity, rel=1e-4)
        tail_mean = est.mean - trap
        analytic_tail = (
            30.0 * PROJECT.Q / MARKET.r * math.exp(-MARKET.r * 10.0)
        )
        assert tail_mean == pytest.approx(analytic_tail, rel=0.02)

    def test_low_volatility(self):
        # with sigma = 1% the price barely moves and both sides approach
        # the deterministic collar payoff at P = 30
        m = MarketParams(mu=0.0, sigma=0.01, r=0.05)
        cfg = SimConfig(n_paths=2000, steps_per_year=12, seed=9)
        est = mc_project_value(COLLAR, 30.0, m, PROJECT, cfg)
        analytic = project_value(COLLAR, 30.0, m, PROJECT).value
        deterministic = 30.0 * PROJECT.Q / m.r
        assert est.mean == pytest.approx(analytic, rel=1e-3)
        assert analytic == pytest.approx(deterministic, rel=1e-3)

    def test_zero_horizon_exact(self):
        est = mc_project_value(Collar(F=25.0, C=CAP, T=0.0), 30.0, MARKET, PROJECT, FAST)
        assert est.std_error == 0.0
        assert est.mean == pytest.approx(30.0 * PROJECT.Q / MARKET.r, rel=1e-12)

    def test_step_doubling_bias(self):
        # halving dt moves the estimate by less than one standard error:
        # quadrature bias is buried in the sampling noise
        coarse = mc_project_value(
            COLLAR, 30.0, MARKET, PROJECT, SimConfig(n_paths=40_000, steps_per_year=26, seed=3)
        )
        fine = mc_project_value(
            COLLAR, 30.0, MARKET, PROJECT, SimConfig(n_paths=40_000, steps_per_year=52, seed=3)
        )
        assert abs(coarse.mean - fine.mean) < max(coarse.std_error, fine.std_error)


class TestBackends:
    def test_backend_reported(self):
        assert BACKEND in ("cython", "numpy")

    @pytest.mark.skipif(BACKEND != "cython", reason="compiled kernel not built")
    def test_backends_agree(self):
        from fitval._pathkernel import profit_pv as compiled

        rng = np.random.default_rng(42)
        z = rng.standard_normal((500, 130))
        args = (
            30.0, 0.0, 0.19, 10.0 / 130, 0.05, 5256.0,
            MODE_CLIPPED, 25.0, CAP, 0.0, 12345.0,
        )
        a = profit_pv_numpy(z, *args)
        b = compiled(z, *args)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-6)


class TestBoundaryCheck:
    def test_base_case_all_schemes(self):
        for scheme in (
            FixedPrice(F=25.0, T=15.0),
            FixedPremium(F=25.0, T=15.0),
            Floor(F=25.0, T=15.0),
            COLLAR,
        ):
            report = exercise_boundary_check(scheme, MARKET, PROJECT)
            assert report.ok, scheme.label
            assert report.n_violations == 0

    def test_with_regulatory_uncertainty(self):
        reg = RegulatoryParams(lam=0.5, omega=0.8, omega_C=1.0)
        report = exercise_boundary_check(COLLAR, MARKET, PROJECT, reg)
        assert report.ok
        assert report.worst_equality_gap <= 1e-6 * PROJECT.I


class TestComparativeStatics:
    def test_tariff_lowers_trigger(self):
        rep = comparative_statics_check(
            COLLAR, MARKET, PROJECT, None, "F", np.linspace(10.0, 40.0, 7)
        )
        assert rep.verdict == "decreasing"

    def test_volatility_raises_trigger(self):
        rep = comparative_statics_check(
            COLLAR, MARKET, PROJECT, None, "sigma", np.linspace(0.1, 0.4, 7)
        )
        assert rep.verdict == "increasing"

    def test_intensity_lowers_trigger(self):
        reg = RegulatoryParams(lam=0.5, omega=0.8, omega_C=1.0)
        rep = comparative_statics_check(
            COLLAR, MARKET, PROJECT, reg, "lambda", np.linspace(0.1, 2.0, 6)
        )
        assert rep.verdict == "decreasing"

    def test_reg_param_needs_reg(self):
        with pytest.raises(InvalidParametersError):
            comparative_statics_check(
                COLLAR, MARKET, PROJECT, None, "omega", [0.5, 0.9]
            )
