"""Independent Monte Carlo and grid-based verification of the analytics.

The simulator never discretizes the price process itself (steps are exact
lognormal draws) and values the post-contract perpetuity analytically per
path, so the only bias left is the trapezoid quadrature of the profit
flow, which the default step density keeps well below the sampling noise.

Per-batch normal increments come from a seeded PCG64DXSM generator jumped
per batch, with a fixed batch size, so the estimate is reproducible bit
for bit and independent of how batches might be dispatched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from ._kernels import MODE_CLIPPED, MODE_PREMIUM, profit_pv
from .core import MarketParams, ProjectParams
from .errors import InvalidParametersError, SubsidyExceedsCostError
from .thresholds import RegulatoryParams, option_value_curve, threshold
from .valuation import Collar, FixedPremium, FixedPrice, Floor, Scheme, value_fn

_BATCH_SIZE = 8192


@dataclass(frozen=True)
class SimConfig:
    n_paths: int = 100_000
    steps_per_year: int = 52
    horizon_tail_years: float = 100.0  # diagnostics only; the tail is analytic
    seed: int = 20240817

    def __post_init__(self):
        if self.n_paths < 1000:
            raise InvalidParametersError(f"n_paths must be >= 1000, got {self.n_paths}")
        if self.steps_per_year < 12:
            raise InvalidParametersError(
                f"steps_per_year must be >= 12, got {self.steps_per_year}"
            )


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_paths: int


def _payoff_args(scheme: Scheme) -> tuple[int, float, float, float]:
    """(mode, lo, hi, premium) for the kernel's profit flow."""
    if isinstance(scheme, FixedPrice):
        return MODE_CLIPPED, scheme.F, scheme.F, 0.0
    if isinstance(scheme, Floor):
        return MODE_CLIPPED, scheme.F, math.inf, 0.0
    if isinstance(scheme, Collar):
        return MODE_CLIPPED, scheme.F, scheme.C, 0.0
    if isinstance(scheme, FixedPremium):
        return MODE_PREMIUM, 0.0, 0.0, scheme.F
    raise InvalidParametersError(f"unknown scheme {scheme!r}")


def mc_project_value(
    scheme: Scheme,
    P: float,
    market: MarketParams,
    project: ProjectParams,
    cfg: SimConfig = SimConfig(),
) -> McEstimate:
    """Simulated value upon investment, with its standard error."""
    if not P > 0.0:
        raise InvalidParametersError(f"price must be positive, got {P}")
    T = scheme.T
    if T == 0.0:
        # No contract window; the value is the market perpetuity exactly.
        return McEstimate(P * project.Q / (market.r - market.mu), 0.0, cfg.n_paths)
    n_steps = max(1, round(cfg.steps_per_year * T))
    dt = T / n_steps
    mode, lo, hi, prem = _payoff_args(scheme)
    tail_scale = project.Q / (market.r - market.mu) * math.exp(-market.r * T)

    total = 0.0
    total_sq = 0.0
    done = 0
    batch = 0
    base = np.random.PCG64DXSM(cfg.seed)
    while done < cfg.n_paths:
        n = min(_BATCH_SIZE, cfg.n_paths - done)
        rng = np.random.Generator(base.jumped(batch))
        z = rng.standard_normal((n, n_steps))
        pv = profit_pv(
            z, P, market.mu, market.sigma, dt, market.r, project.Q,
            mode, lo, hi, prem, tail_scale,
        )
        total += float(np.sum(pv))
        total_sq += float(np.sum(pv * pv))
        done += n
        batch += 1
    mean = total / cfg.n_paths
    var = max(total_sq - cfg.n_paths * mean * mean, 0.0) / (cfg.n_paths - 1)
    return McEstimate(mean, math.sqrt(var / cfg.n_paths), cfg.n_paths)


@dataclass(frozen=True)
class BoundaryReport:
    """Outcome of checking the option value against its exercise payoff."""

    trigger: float
    n_violations: int
    worst_violation: float  # most negative value of F(P) - max(V(P) - I, 0)
    worst_equality_gap: float  # max |F(P) - (V(P) - I)| over P >= trigger
    ok: bool


def exercise_boundary_check(
    scheme: Scheme,
    market: MarketParams,
    project: ProjectParams,
    reg: RegulatoryParams | None = None,
    n_grid: int = 200,
) -> BoundaryReport:
    """Grid check that waiting dominates below the trigger and not above."""
    res = threshold(scheme, market, project, reg)
    curve = option_value_curve(scheme, market, project, reg)
    value = value_fn(scheme, market, project)
    grid = np.linspace(0.2 * res.trigger, 2.0 * res.trigger, n_grid)
    f_vals = np.asarray(curve(grid), dtype=float)
    payoff = np.maximum(np.asarray(value(grid), dtype=float) - project.I, 0.0)
    tol = 1e-6 * project.I
    slack = f_vals - payoff
    n_viol = int(np.sum(slack < -tol))
    above = grid >= res.trigger
    gap = np.abs(
        f_vals[above] - (np.asarray(value(grid[above]), dtype=float) - project.I)
    )
    worst_gap = float(np.max(gap)) if gap.size else 0.0
    return BoundaryReport(
        trigger=res.trigger,
        n_violations=n_viol,
        worst_violation=float(np.min(slack)),
        worst_equality_gap=worst_gap,
        ok=(n_viol == 0 and worst_gap <= tol),
    )


@dataclass(frozen=True)
class StaticsReport:
    param: str
    grid: tuple[float, ...]
    thresholds: tuple[float, ...]
    diffs: tuple[float, ...]
    verdict: str  # "decreasing" | "increasing" | "mixed" | "constant"


_SCHEME_PARAMS = {"F", "C", "T"}
_REG_PARAMS = {"lambda", "omega", "omega_C"}
_MARKET_PARAMS = {"sigma", "mu", "r"}


def _apply_param(scheme, market, reg, param: str, x: float):
    if param in _SCHEME_PARAMS:
        return dc_replace(scheme, **{param: x}), market, reg
    if param in _MARKET_PARAMS:
        return scheme, dc_replace(market, **{param: x}), reg
    if param in _REG_PARAMS:
        if reg is None:
            raise InvalidParametersError(f"{param} sweep needs regulatory parameters")
        field = "lam" if param == "lambda" else param
        return scheme, market, dc_replace(reg, **{field: x})
    raise InvalidParametersError(f"unknown sweep parameter {param!r}")


def comparative_statics_check(
    scheme: Scheme,
    market: MarketParams,
    project: ProjectParams,
    reg: RegulatoryParams | None,
    param: str,
    grid,
) -> StaticsReport:
    """Trigger monotonicity along a parameter grid, by finite differences.

    A point where the subsidy alone already covers the investment cost is
    recorded as a zero trigger (investment is immediate), which keeps the
    monotone-decreasing checks meaningful near that boundary.
    """
    thresholds = []
    for x in grid:
        s, m, g = _apply_param(scheme, market, reg, param, float(x))
        try:
            thresholds.append(threshold(s, m, project, g).trigger)
        except SubsidyExceedsCostError:
            thresholds.append(0.0)
    diffs = [b - a for a, b in zip(thresholds, thresholds[1:])]
    if all(d < 0.0 for d in diffs):
        verdict = "decreasing"
    elif all(d > 0.0 for d in diffs):
        verdict = "increasing"
    elif all(d == 0.0 for d in diffs):
        verdict = "constant"
    elif all(d <= 0.0 for d in diffs):
        verdict = "nonincreasing"
    elif all(d >= 0.0 for d in diffs):
        verdict = "nondecreasing"
    else:
        verdict = "mixed"
    return StaticsReport(
        param=param,
        grid=tuple(float(x) for x in grid),
        thresholds=tuple(thresholds),
        diffs=tuple(diffs),
        verdict=verdict,
    )
