"""Characteristic roots of the pricing ODEs and shared horizon terms.

Everything downstream (project values, triggers, the Monte Carlo checks)
is built on four primitives:

* the two roots ``beta1 > 1`` and ``beta2 < 0`` of the fundamental
  quadratic ``0.5 sigma^2 b(b-1) + mu b - r = 0``,
* the jump-adjusted positive root ``eta1`` of the same quadratic with
  discount rate ``r + lam``,
* the standard normal CDF,
* the ``d_beta`` horizon terms that appear in the delayed-contract values.

All rates are continuous-compounding annual rates; prices are in
currency/MWh and values in currency.  Units are a documentation
convention, not a type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InvalidParametersError

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MarketParams:
    """Risk-neutral GBM parameters: drift ``mu``, volatility ``sigma``, rate ``r``."""

    mu: float
    sigma: float
    r: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise InvalidParametersError(f"sigma must be positive, got {self.sigma}")
        if not self.r > 0.0:
            raise InvalidParametersError(f"r must be positive, got {self.r}")
        if not self.r > self.mu:
            raise InvalidParametersError(
                f"well-posedness requires r > mu, got r={self.r}, mu={self.mu}"
            )


@dataclass(frozen=True)
class ProjectParams:
    """Fixed annual output ``Q`` (MWh/year) and total investment cost ``I``."""

    Q: float
    I: float

    def __post_init__(self):
        if not self.Q > 0.0:
            raise InvalidParametersError(f"Q must be positive, got {self.Q}")
        if not self.I > 0.0:
            raise InvalidParametersError(f"I must be positive, got {self.I}")


@dataclass(frozen=True)
class CharacteristicRoots:
    beta1: float
    beta2: float
    eta1: float | None = None


def beta_roots(market: MarketParams) -> tuple[float, float]:
    """Roots of ``0.5 sigma^2 b(b-1) + mu b - r = 0``; beta1 > 1, beta2 < 0."""
    half_minus = 0.5 - market.mu / market.sigma**2
    disc = math.sqrt(half_minus**2 + 2.0 * market.r / market.sigma**2)
    return half_minus + disc, half_minus - disc


def eta_root(market: MarketParams, lam: float) -> float:
    """Positive root of the quadratic with discount rate ``r + lam``.

    Coincides with ``beta1`` at ``lam = 0`` and grows monotonically in
    ``lam``.
    """
    if lam < 0.0:
        raise InvalidParametersError(f"jump intensity must be >= 0, got {lam}")
    half_minus = 0.5 - market.mu / market.sigma**2
    disc = math.sqrt(half_minus**2 + 2.0 * (market.r + lam) / market.sigma**2)
    return half_minus + disc


def characteristic_roots(market: MarketParams, lam: float | None = None) -> CharacteristicRoots:
    b1, b2 = beta_roots(market)
    eta1 = eta_root(market, lam) if lam is not None else None
    return CharacteristicRoots(beta1=b1, beta2=b2, eta1=eta1)


def norm_cdf(x):
    """Standard normal CDF via the complementary error function.

    Accepts scalars or arrays; absolute error is below 1e-12 everywhere
    (verified against high-precision quadrature in the test suite).  The
    precision bound matters because the delayed-contract values subtract
    nearly equal CDF terms.
    """
    arr = np.asarray(x, dtype=float)
    out = 0.5 * special.erfc(-arr / _SQRT2)
    if arr.ndim == 0:
        return float(out)
    return out


def norm_pdf(x):
    """Standard normal density (used only by diagnostics and tests)."""
    arr = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * arr * arr) / math.sqrt(2.0 * math.pi)
    if arr.ndim == 0:
        return float(out)
    return out


def d_beta(beta: float, P, X, market: MarketParams, T: float):
    """Horizon term ``[ln(P/X) + (mu + sigma^2 (beta - 1/2)) T] / (sigma sqrt(T))``.

    ``T = 0`` is excluded; the valuation layer short-circuits zero-length
    contracts analytically before this is reached.
    """
    if not T > 0.0:
        raise InvalidParametersError(f"T must be positive, got {T}")
    P_arr = np.asarray(P, dtype=float)
    X_arr = np.asarray(X, dtype=float)
    if np.any(P_arr <= 0.0) or np.any(X_arr <= 0.0):
        raise InvalidParametersError("prices P and X must be positive")
    s = market.sigma * math.sqrt(T)
    out = (np.log(P_arr / X_arr) + (market.mu + market.sigma**2 * (beta - 0.5)) * T) / s
    if out.ndim == 0:
        return float(out)
    return out
