"""Project value upon investment for each contract design.

Each finite-horizon contract value is assembled from three pieces: the
perpetual contract, a delayed perpetual contract starting at the contract
end (subtracted to cut the horizon at ``T``), and the discounted
perpetuity of selling at market prices afterwards.

The module also exposes the analytic price derivative of every value
function.  Differentiating the delayed-contract terms, the normal-density
contributions cancel exactly because the perpetual coefficients are fitted
by value and slope continuity; only the power-law prefactors survive.  The
test suite checks the analytic slopes against central finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import MarketParams, ProjectParams, d_beta, beta_roots, norm_cdf
from .errors import InvalidParametersError


# --------------------------------------------------------------------------
# Contract designs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPrice:
    """Pays the tariff F outright for T years."""

    F: float
    T: float
    label = "fixed"

    def __post_init__(self):
        _check_scheme(self.F, self.T)


@dataclass(frozen=True)
class FixedPremium:
    """Pays the market price plus a bonus F for T years."""

    F: float
    T: float
    label = "premium"

    def __post_init__(self):
        _check_scheme(self.F, self.T)


@dataclass(frozen=True)
class Floor:
    """Minimum price guarantee: pays max(P, F) for T years."""

    F: float
    T: float
    label = "floor"

    def __post_init__(self):
        _check_scheme(self.F, self.T)


@dataclass(frozen=True)
class Collar:
    """Sliding premium with cap and floor: pays min(max(P, F), C) for T years."""

    F: float
    C: float
    T: float
    label = "collar"

    def __post_init__(self):
        _check_scheme(self.F, self.T)
        if self.C < self.F:
            raise InvalidParametersError(f"cap C={self.C} must be >= floor F={self.F}")


Scheme = FixedPrice | FixedPremium | Floor | Collar

SCHEME_LABELS = ("fixed", "premium", "floor", "collar")


def _check_scheme(F: float, T: float) -> None:
    if F < 0.0:
        raise InvalidParametersError(f"tariff F must be >= 0, got {F}")
    if T < 0.0:
        raise InvalidParametersError(f"duration T must be >= 0, got {T}")


class Region(Enum):
    BELOW_FLOOR = "below_floor"
    INTERIOR = "interior"
    ABOVE_CAP = "above_cap"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class ValuationResult:
    value: float
    region: Region


@dataclass(frozen=True)
class CollarCoefficients:
    """Closed-form constants of the perpetual collar value."""

    E1: float
    G1: float
    G2: float
    H2: float


@dataclass(frozen=True)
class FloorCoefficients:
    """Closed-form constants of the perpetual minimum price guarantee."""

    L1: float
    M2: float


# --------------------------------------------------------------------------
# Coefficients
# --------------------------------------------------------------------------

def _brackets(market: MarketParams) -> tuple[float, float, float, float]:
    """beta roots plus the two rate brackets shared by all coefficients."""
    b1, b2 = beta_roots(market)
    r, mu = market.r, market.mu
    k1 = b1 / r - (b1 - 1.0) / (r - mu)
    k2 = b2 / r - (b2 - 1.0) / (r - mu)
    return b1, b2, k1, k2


def collar_coefficients(
    scheme: Collar, market: MarketParams, project: ProjectParams
) -> CollarCoefficients:
    if scheme.F <= 0.0:
        raise InvalidParametersError("collar coefficients require F > 0")
    b1, b2, k1, k2 = _brackets(market)
    Q = project.Q
    F, C = scheme.F, scheme.C
    span = b1 - b2
    E1 = (F ** (1.0 - b1) - C ** (1.0 - b1)) * Q / span * k2
    G1 = -(C ** (1.0 - b1)) * Q / span * k2
    G2 = F ** (1.0 - b2) * Q / span * k1
    H2 = (F ** (1.0 - b2) - C ** (1.0 - b2)) * Q / span * k1
    return CollarCoefficients(E1=E1, G1=G1, G2=G2, H2=H2)


def floor_coefficients(
    scheme: Floor, market: MarketParams, project: ProjectParams
) -> FloorCoefficients:
    if scheme.F <= 0.0:
        raise InvalidParametersError("floor coefficients require F > 0")
    b1, b2, k1, k2 = _brackets(market)
    Q, F = project.Q, scheme.F
    span = b1 - b2
    L1 = Q * F ** (1.0 - b1) / span * k2
    M2 = Q * F ** (1.0 - b2) / span * k1
    return FloorCoefficients(L1=L1, M2=M2)


# --------------------------------------------------------------------------
# Raw (array-aware) value and slope functions
# --------------------------------------------------------------------------

def _market_perpetuity(P, market: MarketParams, project: ProjectParams):
    return np.asarray(P, dtype=float) * project.Q / (market.r - market.mu)


def perpetual_collar_raw(P, scheme: Collar, market, project):
    c = collar_coefficients(scheme, market, project)
    b1, b2 = beta_roots(market)
    P = np.asarray(P, dtype=float)
    Q, r, mu = project.Q, market.r, market.mu
    below = c.E1 * P**b1 + scheme.F * Q / r
    mid = c.G1 * P**b1 + c.G2 * P**b2 + P * Q / (r - mu)
    above = c.H2 * P**b2 + scheme.C * Q / r
    return np.where(P < scheme.F, below, np.where(P < scheme.C, mid, above))


def perpetual_collar_slope(P, scheme: Collar, market, project):
    c = collar_coefficients(scheme, market, project)
    b1, b2 = beta_roots(market)
    P = np.asarray(P, dtype=float)
    Q, r, mu = project.Q, market.r, market.mu
    below = b1 * c.E1 * P ** (b1 - 1.0)
    mid = b1 * c.G1 * P ** (b1 - 1.0) + b2 * c.G2 * P ** (b2 - 1.0) + Q / (r - mu)
    above = b2 * c.H2 * P ** (b2 - 1.0)
    return np.where(P < scheme.F, below, np.where(P < scheme.C, mid, above))


def _delayed_collar_terms(P, scheme: Collar, market, project):
    """CDF factors shared by the delayed collar value and its slope."""
    b1, b2 = beta_roots(market)
    F, C, T = scheme.F, scheme.C, scheme.T
    phi_b1_F = norm_cdf(d_beta(b1, P, F, market, T))
    phi_b1_C = norm_cdf(d_beta(b1, P, C, market, T))
    phi_b2_F = norm_cdf(d_beta(b2, P, F, market, T))
    phi_b2_C = norm_cdf(d_beta(b2, P, C, market, T))
    phi_1_F = norm_cdf(d_beta(1.0, P, F, market, T))
    phi_1_C = norm_cdf(d_beta(1.0, P, C, market, T))
    phi_0_F = norm_cdf(d_beta(0.0, P, F, market, T))
    phi_0_C = norm_cdf(d_beta(0.0, P, C, market, T))
    return (phi_b1_F, phi_b1_C, phi_b2_F, phi_b2_C, phi_1_F, phi_1_C, phi_0_F, phi_0_C)


def delayed_collar_raw(P, scheme: Collar, market, project):
    c = collar_coefficients(scheme, market, project)
    b1, b2 = beta_roots(market)
    P = np.asarray(P, dtype=float)
    Q, r, mu = project.Q, market.r, market.mu
    F, C, T = scheme.F, scheme.C, scheme.T
    (pb1F, pb1C, pb2F, pb2C, p1F, p1C, p0F, p0C) = _delayed_collar_terms(
        P, scheme, market, project
    )
    return (
        c.E1 * P**b1 * (1.0 - pb1F)
        + F * Q / r * math.exp(-r * T) * (1.0 - p0F)
        + c.G1 * P**b1 * (pb1F - pb1C)
        + c.G2 * P**b2 * (pb2F - pb2C)
        + P * Q / (r - mu) * math.exp(-(r - mu) * T) * (p1F - p1C)
        + c.H2 * P**b2 * pb2C
        + C * Q / r * math.exp(-r * T) * p0C
    )


def delayed_collar_slope(P, scheme: Collar, market, project):
    # Density terms cancel by the C1 fit of the perpetual coefficients;
    # only the prefactor derivatives remain.
    c = collar_coefficients(scheme, market, project)
    b1, b2 = beta_roots(market)
    P = np.asarray(P, dtype=float)
    Q, r, mu = project.Q, market.r, market.mu
    T = scheme.T
    (pb1F, pb1C, pb2F, pb2C, p1F, p1C, _p0F, _p0C) = _delayed_collar_terms(
        P, scheme, market, project
    )
    return (
        b1 * c.E1 * P ** (b1 - 1.0) * (1.0 - pb1F)
        + b1 * c.G1 * P ** (b1 - 1.0) * (pb1F - pb1C)
        + b2 * c.G2 * P ** (b2 - 1.0) * (pb2F - pb2C)
        + Q / (r - mu) * math.exp(-(r - mu) * T) * (p1F - p1C)
        + b2 * c.H2 * P ** (b2 - 1.0) * pb2C
    )


def finite_collar_raw(P, scheme: Collar, market, project):
    if scheme.T == 0.0:
        return _market_perpetuity(P, market, project)
    tail = math.exp(-(market.r - market.mu) * scheme.T)
    return (
        perpetual_collar_raw(P, scheme, market, project)
        - delayed_collar_raw(P, scheme, market, project)
        + _market_perpetuity(P, market, project) * tail
    )


def finite_collar_slope(P, scheme: Collar, market, project):
    Q, r, mu = project.Q, market.r, market.mu
    if scheme.T == 0.0:
        return np.full_like(np.asarray(P, dtype=float), Q / (r - mu))
    tail = math.exp(-(r - mu) * scheme.T)
    return (
        perpetual_collar_slope(P, scheme, market, project)
        - delayed_collar_slope(P, scheme, market, project)
        + Q / (r - mu) * tail
    )


def perpetual_floor_raw(P, scheme: Floor, market, project):
    c = floor_coefficients(scheme, market, project)
    b1, b2 = beta_roots(market)
    P = np.asarray(P, dtype=float)
    Q, r, mu = project.Q, market.r, market.mu
    below = c.L1 * P**b1 + scheme.F * Q / r
    above = c.M2 * P**b2 + P * Q / (r - mu)
    return np.where(P < scheme.F, below, above)


def perpetual_floor_slope(P, scheme: Floor, market, project):
    c = floor_coefficients(scheme, market, project)
    b1, b2 = beta_roots(market)
    P = np.asarray(P, dtype=float)
    Q, r, mu = project.Q, market.r, market.mu
    below = b1 * c.L1 * P ** (b1 - 1.0)
    above = b2 * c.M2 * P ** (b2 - 1.0) + Q / (r - mu)
    return np.where(P < scheme.F, below, above)


def delayed_floor_raw(P, scheme: Floor, market, project):
    c = floor_coefficients(scheme, market, project)
    b1, b2 = beta_roots(market)
    P = np.asarray(P, dtype=float)
    Q, r, mu = project.Q, market.r, market.mu
    F, T = scheme.F, scheme.T
    pb1 = norm_cdf(d_beta(b1, P, F, market, T))
    pb2 = norm_cdf(d_beta(b2, P, F, market, T))
    p1 = norm_cdf(d_beta(1.0, P, F, market, T))
    p0 = norm_cdf(d_beta(0.0, P, F, market, T))
    return (
        c.L1 * P**b1 * (1.0 - pb1)
        + F * Q / r * math.exp(-r * T) * (1.0 - p0)
        + c.M2 * P**b2 * pb2
        + P * Q / (r - mu) * math.exp(-(r - mu) * T) * p1
    )


def delayed_floor_slope(P, scheme: Floor, market, project):
    c = floor_coefficients(scheme, market, project)
    b1, b2 = beta_roots(market)
    P = np.asarray(P, dtype=float)
    Q, r, mu = project.Q, market.r, market.mu
    F, T = scheme.F, scheme.T
    pb1 = norm_cdf(d_beta(b1, P, F, market, T))
    pb2 = norm_cdf(d_beta(b2, P, F, market, T))
    p1 = norm_cdf(d_beta(1.0, P, F, market, T))
    return (
        b1 * c.L1 * P ** (b1 - 1.0) * (1.0 - pb1)
        + b2 * c.M2 * P ** (b2 - 1.0) * pb2
        + Q / (r - mu) * math.exp(-(r - mu) * T) * p1
    )


def finite_floor_raw(P, scheme: Floor, market, project):
    if scheme.T == 0.0 or scheme.F == 0.0:
        # F = 0 floor pays the market price; the contract window is moot.
        return _market_perpetuity(P, market, project)
    tail = math.exp(-(market.r - market.mu) * scheme.T)
    return (
        perpetual_floor_raw(P, scheme, market, project)
        - delayed_floor_raw(P, scheme, market, project)
        + _market_perpetuity(P, market, project) * tail
    )


def finite_floor_slope(P, scheme: Floor, market, project):
    Q, r, mu = project.Q, market.r, market.mu
    if scheme.T == 0.0 or scheme.F == 0.0:
        return np.full_like(np.asarray(P, dtype=float), Q / (r - mu))
    tail = math.exp(-(r - mu) * scheme.T)
    return (
        perpetual_floor_slope(P, scheme, market, project)
        - delayed_floor_slope(P, scheme, market, project)
        + Q / (r - mu) * tail
    )


def fixed_price_raw(P, scheme: FixedPrice, market, project):
    Q, r, mu = project.Q, market.r, market.mu
    T, F = scheme.T, scheme.F
    P = np.asarray(P, dtype=float)
    return F * Q / r * (1.0 - math.exp(-r * T)) + P * Q / (r - mu) * math.exp(
        -(r - mu) * T
    )


def fixed_price_slope(P, scheme: FixedPrice, market, project):
    Q, r, mu = project.Q, market.r, market.mu
    return np.full_like(
        np.asarray(P, dtype=float), Q / (r - mu) * math.exp(-(r - mu) * scheme.T)
    )


def fixed_premium_raw(P, scheme: FixedPremium, market, project):
    Q, r, mu = project.Q, market.r, market.mu
    P = np.asarray(P, dtype=float)
    return P * Q / (r - mu) + scheme.F * Q / r * (1.0 - math.exp(-r * scheme.T))


def fixed_premium_slope(P, scheme: FixedPremium, market, project):
    Q, r, mu = project.Q, market.r, market.mu
    return np.full_like(np.asarray(P, dtype=float), Q / (r - mu))


_RAW = {
    FixedPrice: fixed_price_raw,
    FixedPremium: fixed_premium_raw,
    Floor: finite_floor_raw,
    Collar: finite_collar_raw,
}

_SLOPE = {
    FixedPrice: fixed_price_slope,
    FixedPremium: fixed_premium_slope,
    Floor: finite_floor_slope,
    Collar: finite_collar_slope,
}


def value_fn(scheme: Scheme, market: MarketParams, project: ProjectParams):
    """Array-aware finite-contract value as a function of price."""
    raw = _RAW[type(scheme)]
    return lambda P: raw(P, scheme, market, project)


def slope_fn(scheme: Scheme, market: MarketParams, project: ProjectParams):
    """Array-aware price derivative of the finite-contract value."""
    raw = _SLOPE[type(scheme)]
    return lambda P: raw(P, scheme, market, project)


# --------------------------------------------------------------------------
# Public scalar operations
# --------------------------------------------------------------------------

def _check_price(P: float) -> None:
    if not P > 0.0:
        raise InvalidParametersError(f"price must be positive, got {P}")


def _collar_region(P: float, scheme: Collar) -> Region:
    if P < scheme.F:
        return Region.BELOW_FLOOR
    if P < scheme.C:
        return Region.INTERIOR
    return Region.ABOVE_CAP


def _floor_region(P: float, scheme: Floor) -> Region:
    return Region.BELOW_FLOOR if P < scheme.F else Region.INTERIOR


def perpetual_collar_value(P: float, scheme: Collar, market, project) -> ValuationResult:
    _check_price(P)
    return ValuationResult(
        float(perpetual_collar_raw(P, scheme, market, project)),
        _collar_region(P, scheme),
    )


def delayed_collar_value(P: float, scheme: Collar, market, project) -> float:
    _check_price(P)
    if scheme.T == 0.0:
        return float(perpetual_collar_raw(P, scheme, market, project))
    return float(delayed_collar_raw(P, scheme, market, project))


def finite_collar_value(P: float, scheme: Collar, market, project) -> ValuationResult:
    _check_price(P)
    return ValuationResult(
        float(finite_collar_raw(P, scheme, market, project)),
        _collar_region(P, scheme),
    )


def perpetual_floor_value(P: float, scheme: Floor, market, project) -> ValuationResult:
    _check_price(P)
    return ValuationResult(
        float(perpetual_floor_raw(P, scheme, market, project)),
        _floor_region(P, scheme),
    )


def delayed_floor_value(P: float, scheme: Floor, market, project) -> float:
    _check_price(P)
    if scheme.T == 0.0:
        return float(perpetual_floor_raw(P, scheme, market, project))
    return float(delayed_floor_raw(P, scheme, market, project))


def finite_floor_value(P: float, scheme: Floor, market, project) -> ValuationResult:
    _check_price(P)
    return ValuationResult(
        float(finite_floor_raw(P, scheme, market, project)),
        _floor_region(P, scheme),
    )


def fixed_price_value(P: float, scheme: FixedPrice, market, project) -> float:
    _check_price(P)
    return float(fixed_price_raw(P, scheme, market, project))


def fixed_premium_value(P: float, scheme: FixedPremium, market, project) -> float:
    _check_price(P)
    return float(fixed_premium_raw(P, scheme, market, project))


def project_value(scheme: Scheme, P: float, market, project) -> ValuationResult:
    """Dispatch to the scheme-specific finite-contract value."""
    _check_price(P)
    value = float(value_fn(scheme, market, project)(P))
    if isinstance(scheme, Collar):
        region = _collar_region(P, scheme)
    elif isinstance(scheme, Floor):
        region = _floor_region(P, scheme)
    else:
        region = Region.NOT_APPLICABLE
    return ValuationResult(value, region)
