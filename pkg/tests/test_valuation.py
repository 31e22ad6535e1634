"""Project values: coefficients, smoothness, limits, slopes, dominance."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fitval.core import MarketParams, ProjectParams, beta_roots
from fitval.errors import InvalidParametersError
from fitval.valuation import (
    Collar,
    FixedPremium,
    FixedPrice,
    Floor,
    Region,
    collar_coefficients,
    delayed_collar_value,
    delayed_floor_value,
    finite_collar_raw,
    finite_collar_value,
    finite_floor_raw,
    finite_floor_value,
    fixed_premium_value,
    fixed_price_value,
    floor_coefficients,
    perpetual_collar_raw,
    perpetual_collar_value,
    perpetual_floor_raw,
    project_value,
    slope_fn,
    value_fn,
)

MARKET = MarketParams(mu=0.0, sigma=0.19, r=0.05)
PROJECT = ProjectParams(Q=5256.0, I=3_000_000.0)
CAP = 300_000.0 / 5256.0  # ~57.08 currency/MWh
COLLAR = Collar(F=25.0, C=CAP, T=15.0)
FLOOR = Floor(F=25.0, T=15.0)
FIXED = FixedPrice(F=25.0, T=15.0)
PREMIUM = FixedPremium(F=25.0, T=15.0)


def random_market(rng):
    mu = rng.uniform(-0.02, 0.03)
    return MarketParams(
        mu=mu, sigma=rng.uniform(0.1, 0.4), r=max(mu, 0.0) + rng.uniform(0.01, 0.06)
    )


class TestCoefficients:
    def test_collar_signs(self):
        c = collar_coefficients(COLLAR, MARKET, PROJECT)
        assert c.E1 > 0.0
        assert c.G1 < 0.0
        assert c.G2 > 0.0
        assert c.H2 < 0.0

    def test_floor_signs(self):
        c = floor_coefficients(FLOOR, MARKET, PROJECT)
        assert c.L1 > 0.0
        assert c.M2 > 0.0

    def test_floor_matches_collar_interior(self):
        # The floor coefficient pair is the C -> infinity limit of the
        # collar's interior/below-floor pair.
        cc = collar_coefficients(Collar(F=25.0, C=1e9, T=15.0), MARKET, PROJECT)
        fc = floor_coefficients(FLOOR, MARKET, PROJECT)
        assert cc.G2 == pytest.approx(fc.M2, rel=1e-12)
        assert cc.E1 == pytest.approx(fc.L1, rel=1e-6)

    def test_degenerate_cap_collapses(self):
        c = collar_coefficients(Collar(F=25.0, C=25.0, T=15.0), MARKET, PROJECT)
        assert c.E1 == pytest.approx(0.0, abs=1e-12)
        assert c.H2 == pytest.approx(0.0, abs=1e-12)

    def test_zero_floor_rejected(self):
        with pytest.raises(InvalidParametersError):
            collar_coefficients(Collar(F=0.0, C=10.0, T=15.0), MARKET, PROJECT)
        with pytest.raises(InvalidParametersError):
            floor_coefficients(Floor(F=0.0, T=15.0), MARKET, PROJECT)

    def test_random_sign_pattern(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            m = random_market(rng)
            F = rng.uniform(5.0, 40.0)
            C = F + rng.uniform(0.5, 60.0)
            c = collar_coefficients(Collar(F=F, C=C, T=10.0), m, PROJECT)
            assert c.E1 > 0.0 and c.G1 < 0.0 and c.G2 > 0.0 and c.H2 < 0.0


class TestPerpetualValues:
    def test_smooth_at_kinks(self):
        # The adjacent branch expressions agree in value and slope at F
        # and at C (the coefficients are a C1 fit).
        c = collar_coefficients(COLLAR, MARKET, PROJECT)
        b1, b2 = beta_roots(MARKET)
        Q, r, mu = PROJECT.Q, MARKET.r, MARKET.mu
        F, C = COLLAR.F, COLLAR.C

        def mid(P):
            return c.G1 * P**b1 + c.G2 * P**b2 + P * Q / (r - mu)

        def mid_slope(P):
            return b1 * c.G1 * P ** (b1 - 1) + b2 * c.G2 * P ** (b2 - 1) + Q / (r - mu)

        below, below_slope = c.E1 * F**b1 + F * Q / r, b1 * c.E1 * F ** (b1 - 1)
        above, above_slope = c.H2 * C**b2 + C * Q / r, b2 * c.H2 * C ** (b2 - 1)
        assert below == pytest.approx(mid(F), rel=1e-10)
        assert below_slope == pytest.approx(mid_slope(F), rel=1e-10)
        assert above == pytest.approx(mid(C), rel=1e-10)
        assert above_slope == pytest.approx(mid_slope(C), rel=1e-10)

    def test_low_price_limit(self):
        # As P -> 0 the perpetual collar tends to the floor annuity F Q / r.
        val = float(perpetual_collar_raw(1e-8, COLLAR, MARKET, PROJECT))
        assert val == pytest.approx(COLLAR.F * PROJECT.Q / MARKET.r, rel=1e-9)

    def test_high_price_limit(self):
        # As P -> infinity the perpetual collar tends to the cap annuity.
        val = float(perpetual_collar_raw(1e10, COLLAR, MARKET, PROJECT))
        assert val == pytest.approx(COLLAR.C * PROJECT.Q / MARKET.r, rel=1e-9)

    def test_floor_bounds(self):
        grid = np.linspace(1.0, 200.0, 400)
        v = perpetual_floor_raw(grid, FLOOR, MARKET, PROJECT)
        market_leg = grid * PROJECT.Q / (MARKET.r - MARKET.mu)
        floor_leg = FLOOR.F * PROJECT.Q / MARKET.r
        assert np.all(v >= market_leg - 1e-6)
        assert np.all(v >= floor_leg - 1e-6)

    def test_region_tags(self):
        assert perpetual_collar_value(10.0, COLLAR, MARKET, PROJECT).region is Region.BELOW_FLOOR
        assert perpetual_collar_value(30.0, COLLAR, MARKET, PROJECT).region is Region.INTERIOR
        assert perpetual_collar_value(80.0, COLLAR, MARKET, PROJECT).region is Region.ABOVE_CAP


class TestFiniteValues:
    def test_fixed_price_base_case(self):
        # Base-case fixed price value at P = 30: about 2.8763e6.
        val = fixed_price_value(30.0, FIXED, MARKET, PROJECT)
        assert val == pytest.approx(2_876_276.0, abs=5.0)

    def test_premium_is_price_plus_market(self):
        # premium value = free-market perpetuity + tariff annuity, exactly
        for P in (5.0, 30.0, 90.0):
            expected = P * PROJECT.Q / MARKET.r + PREMIUM.F * PROJECT.Q / MARKET.r * (
                1.0 - math.exp(-MARKET.r * PREMIUM.T)
            )
            assert fixed_premium_value(P, PREMIUM, MARKET, PROJECT) == pytest.approx(
                expected, rel=1e-14
            )

    def test_degenerate_cap_equals_fixed_price(self):
        tight = Collar(F=25.0, C=25.0, T=15.0)
        for P in (5.0, 25.0, 60.0):
            vc = finite_collar_value(P, tight, MARKET, PROJECT).value
            vf = fixed_price_value(P, FixedPrice(F=25.0, T=15.0), MARKET, PROJECT)
            assert vc == pytest.approx(vf, rel=1e-9)

    def test_huge_cap_equals_floor(self):
        wide = Collar(F=25.0, C=1e6, T=15.0)
        for P in (5.0, 30.0, 100.0):
            vc = finite_collar_value(P, wide, MARKET, PROJECT).value
            vf = finite_floor_value(P, FLOOR, MARKET, PROJECT).value
            assert vc == pytest.approx(vf, rel=1e-6)

    def test_floor_dominates_collar(self):
        grid = np.linspace(0.5, 150.0, 200)
        v_floor = finite_floor_raw(grid, FLOOR, MARKET, PROJECT)
        v_collar = finite_collar_raw(grid, COLLAR, MARKET, PROJECT)
        assert np.all(v_floor >= v_collar - 1e-6)

    def test_zero_horizon_is_market_perpetuity(self):
        for scheme in (
            FixedPrice(F=25.0, T=0.0),
            FixedPremium(F=25.0, T=0.0),
            Floor(F=25.0, T=0.0),
            Collar(F=25.0, C=CAP, T=0.0),
        ):
            val = project_value(scheme, 30.0, MARKET, PROJECT).value
            assert val == pytest.approx(
                30.0 * PROJECT.Q / (MARKET.r - MARKET.mu), rel=1e-12
            )

    def test_zero_floor_is_market_perpetuity(self):
        val = finite_floor_value(30.0, Floor(F=0.0, T=15.0), MARKET, PROJECT).value
        assert val == pytest.approx(30.0 * PROJECT.Q / MARKET.r, rel=1e-12)

    def test_monotone_in_price(self):
        grid = np.linspace(0.5, 200.0, 500)
        for scheme in (FIXED, PREMIUM, FLOOR, COLLAR):
            v = value_fn(scheme, MARKET, PROJECT)(grid)
            assert np.all(np.diff(v) > 0.0), scheme.label

    def test_monotone_in_tariff(self):
        for make in (
            lambda F: FixedPrice(F=F, T=15.0),
            lambda F: FixedPremium(F=F, T=15.0),
            lambda F: Floor(F=F, T=15.0),
            lambda F: Collar(F=F, C=80.0, T=15.0),
        ):
            vals = [
                project_value(make(F), 30.0, MARKET, PROJECT).value
                for F in np.linspace(5.0, 45.0, 9)
            ]
            assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_monotone_in_cap(self):
        vals = [
            finite_collar_value(30.0, Collar(F=25.0, C=C, T=15.0), MARKET, PROJECT).value
            for C in np.linspace(26.0, 120.0, 10)
        ]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_delayed_value_decays(self):
        # A contract starting 200 years out is worth almost nothing today.
        far = Collar(F=25.0, C=CAP, T=200.0)
        d = delayed_collar_value(30.0, far, MARKET, PROJECT)
        near = delayed_collar_value(30.0, COLLAR, MARKET, PROJECT)
        assert 0.0 < d < 1e-3 * near
        far_floor = Floor(F=25.0, T=200.0)
        assert 0.0 < delayed_floor_value(30.0, far_floor, MARKET, PROJECT) < 1e-3 * near

    def test_rejects_nonpositive_price(self):
        with pytest.raises(InvalidParametersError):
            project_value(COLLAR, 0.0, MARKET, PROJECT)
        with pytest.raises(InvalidParametersError):
            fixed_price_value(-3.0, FIXED, MARKET, PROJECT)


class TestSlopes:
    @pytest.mark.parametrize("scheme", [FIXED, PREMIUM, FLOOR, COLLAR],
                             ids=lambda s: s.label)
    def test_matches_finite_difference(self, scheme):
        value = value_fn(scheme, MARKET, PROJECT)
        slope = slope_fn(scheme, MARKET, PROJECT)
        # stay away from the kinks at F and C where FD straddles regions
        grid = np.array([5.0, 15.0, 24.0, 26.0, 40.0, 55.0, 70.0, 120.0])
        h = 1e-5
        fd = (value(grid + h) - value(grid - h)) / (2 * h)
        assert np.allclose(slope(grid), fd, rtol=1e-6, atol=1e-6)

    def test_slope_continuous_at_kinks(self):
        slope = slope_fn(COLLAR, MARKET, PROJECT)
        for x in (COLLAR.F, COLLAR.C):
            h = 1e-9 * x
            assert float(slope(x - h)) == pytest.approx(float(slope(x + h)), rel=1e-6)

    @settings(max_examples=60, deadline=None)
    @given(P=st.floats(1.0, 150.0), F=st.floats(5.0, 40.0),
           width=st.floats(1.0, 60.0), T=st.floats(0.5, 30.0))
    def test_collar_slope_random(self, P, F, width, T):
        scheme = Collar(F=F, C=F + width, T=T)
        for kink in (scheme.F, scheme.C):
            if abs(P - kink) < 1e-3:
                return  # central difference would straddle a kink
        value = value_fn(scheme, MARKET, PROJECT)
        slope = slope_fn(scheme, MARKET, PROJECT)
        h = 1e-6 * max(P, 1.0)
        fd = (float(value(P + h)) - float(value(P - h))) / (2 * h)
        assert float(slope(P)) == pytest.approx(fd, rel=1e-5, abs=1e-4)
