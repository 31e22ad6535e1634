"""Optimal investment triggers and option values for every contract design.

All numeric triggers come from one residual family.  Without tariff-cut
risk the value-matching and smooth-pasting conditions collapse to

    beta1 (V(P) - I) - P V'(P) = 0,

and with a Poisson-timed tariff cut (intensity ``lam``, reduced contract
prefactor ``red``) to

    eta1 (V(P) - I - red P^beta1) + beta1 red P^beta1 - P V'(P) = 0.

Because ``V`` is piecewise, each residual is solved separately inside each
region of its own piecewise definition and only region-consistent roots
are accepted.  Uniqueness is not guaranteed analytically, so ambiguous
outcomes raise ``MultipleRootsError`` instead of picking silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .core import MarketParams, ProjectParams, beta_roots, eta_root
from .errors import (
    InvalidParametersError,
    MultipleRootsError,
    NoRootError,
    SubsidyExceedsCostError,
)
from .valuation import (
    Collar,
    FixedPremium,
    FixedPrice,
    Floor,
    Scheme,
    slope_fn,
    value_fn,
)

# Bracketing policy: every trigger in this model is of the same order as
# the free-market trigger, so the scan starts at 10x that scale and is
# doubled up to 1000x before giving up.
_BRACKET_LO = 1e-6
_BRACKET_START = 10.0
_BRACKET_CAP = 1000.0
_SCAN_PROBES = 512
_SOLVER_RTOL = 1e-10
_LAMBDA_EPS = 1e-8


class Branch(Enum):
    BELOW_FLOOR = "below_floor"
    INTERIOR = "interior"
    ABOVE_CAP = "above_cap"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class RegulatoryParams:
    """Poisson jump intensity and tariff/cap reduction factors."""

    lam: float
    omega: float
    omega_C: float = 1.0

    def __post_init__(self):
        if self.lam < 0.0:
            raise InvalidParametersError(f"lambda must be >= 0, got {self.lam}")
        for name, v in (("omega", self.omega), ("omega_C", self.omega_C)):
            if not 0.0 <= v <= 1.0:
                raise InvalidParametersError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class ThresholdResult:
    trigger: float
    branch: Branch
    vm_residual: float
    sp_residual: float
    iterations: int


def free_market_trigger(market: MarketParams, project: ProjectParams) -> float:
    """Trigger without any subsidy (fixed premium at F = 0)."""
    b1, _ = beta_roots(market)
    return b1 / (b1 - 1.0) * (market.r - market.mu) * project.I / project.Q


def _subsidy_value(F: float, T: float, market: MarketParams, project: ProjectParams) -> float:
    return F * project.Q / market.r * (1.0 - math.exp(-market.r * T))


# --------------------------------------------------------------------------
# Branch solver
# --------------------------------------------------------------------------

def solve_branch_system(branches, scale: float, admissible=None) -> tuple[float, int, int]:
    """Solve region-restricted residuals; return (root, branch index, iterations).

    ``branches`` is a sequence of ``(residual, lo, hi)`` where each residual
    is array-aware and continuous on its region ``[lo, hi)``.  Each region
    is scanned with log-spaced probes for sign changes, which are refined
    by Brent's method.  When several distinct roots survive, ``admissible``
    (a predicate on the root) discards the economically invalid ones --
    the fitted option coefficient can come out negative at a spurious
    crossing.  Raises ``NoRootError`` if no region-consistent sign change
    exists within the bracket cap, ``MultipleRootsError`` if more than one
    admissible root remains.
    """
    hi_limit = _BRACKET_START * scale
    cap = _BRACKET_CAP * scale
    while True:
        roots: list[tuple[float, int, int]] = []
        for idx, (resid, lo_r, hi_r) in enumerate(branches):
            lo = max(lo_r, _BRACKET_LO)
            hi = min(hi_r, hi_limit)
            if not lo < hi:
                continue
            grid = np.geomspace(lo, hi, _SCAN_PROBES)
            vals = np.asarray(resid(grid), dtype=float)
            sign = np.sign(vals)
            for k in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
                root, info = brentq(
                    lambda p: float(resid(p)),
                    grid[k],
                    grid[k + 1],
                    rtol=_SOLVER_RTOL,
                    full_output=True,
                )
                roots.append((float(root), idx, int(info.iterations)))
            for k in np.nonzero(sign == 0.0)[0]:
                roots.append((float(grid[k]), idx, 0))
        deduped: list[tuple[float, int, int]] = []
        for cand in sorted(roots):
            if not deduped or abs(cand[0] - deduped[-1][0]) > 1e-6 * max(
                deduped[-1][0], 1e-12
            ):
                deduped.append(cand)
        if deduped or hi_limit >= cap:
            break
        hi_limit = min(2.0 * hi_limit, cap)
    if not deduped:
        raise NoRootError(f"no sign change found within bracket (0, {cap:.6g}]")
    if admissible is not None:
        kept = [c for c in deduped if admissible(c[0])]
        if not kept:
            raise NoRootError(
                "no economically admissible root among candidates "
                + ", ".join(f"{c[0]:.6g}" for c in deduped)
            )
        deduped = kept
    if len(deduped) > 1:
        raise MultipleRootsError([c[0] for c in deduped])
    return deduped[0]


def _regions(scheme: Scheme) -> list[tuple[float, float, Branch]]:
    if isinstance(scheme, Collar):
        return [
            (0.0, scheme.F, Branch.BELOW_FLOOR),
            (scheme.F, scheme.C, Branch.INTERIOR),
            (scheme.C, math.inf, Branch.ABOVE_CAP),
        ]
    if isinstance(scheme, Floor):
        return [
            (0.0, scheme.F, Branch.BELOW_FLOOR),
            (scheme.F, math.inf, Branch.INTERIOR),
        ]
    return [(0.0, math.inf, Branch.INTERIOR)]


# --------------------------------------------------------------------------
# No regulatory uncertainty
# --------------------------------------------------------------------------

def _closed_form_threshold(scheme, market, project, discounted: bool) -> ThresholdResult:
    b1, _ = beta_roots(market)
    sub = _subsidy_value(scheme.F, scheme.T, market, project)
    if sub >= project.I:
        raise SubsidyExceedsCostError(
            f"subsidy value {sub:.6g} >= investment cost {project.I:.6g}; "
            "investment is immediate at any price"
        )
    denom = project.Q
    if discounted:
        denom *= math.exp(-(market.r - market.mu) * scheme.T)
    trigger = b1 / (b1 - 1.0) * (market.r - market.mu) / denom * (project.I - sub)
    vm, sp = _fit_residuals(trigger, scheme, market, project, reg=None)
    return ThresholdResult(trigger, Branch.CLOSED_FORM, vm, sp, iterations=0)


def threshold_fixed_price(scheme: FixedPrice, market, project) -> ThresholdResult:
    return _closed_form_threshold(scheme, market, project, discounted=True)


def threshold_fixed_premium(scheme: FixedPremium, market, project) -> ThresholdResult:
    return _closed_form_threshold(scheme, market, project, discounted=False)


def _check_waiting_region(scheme, market, project) -> None:
    """Immediate investment dominates when the guaranteed income covers I."""
    sub = _subsidy_value(scheme.F, scheme.T, market, project)
    if sub >= project.I:
        raise SubsidyExceedsCostError(
            f"guaranteed contract income {sub:.6g} >= investment cost "
            f"{project.I:.6g}; investment is immediate at any price"
        )


def _numeric_threshold(scheme, market, project) -> ThresholdResult:
    _check_waiting_region(scheme, market, project)
    b1, _ = beta_roots(market)
    value = value_fn(scheme, market, project)
    slope = slope_fn(scheme, market, project)
    I = project.I

    def resid(P):
        P = np.asarray(P, dtype=float)
        return b1 * (value(P) - I) - P * slope(P)

    def admissible(star):
        a1 = (float(value(star)) - I) / star**b1
        if a1 <= 0.0:
            return False
        return _dominates_below(
            star, lambda P: a1 * P**b1, value, I
        )

    regions = _regions(scheme)
    branches = [(resid, lo, hi) for lo, hi, _ in regions]
    root, idx, iters = solve_branch_system(
        branches, free_market_trigger(market, project), admissible
    )
    vm, sp = _fit_residuals(root, scheme, market, project, reg=None)
    return ThresholdResult(root, regions[idx][2], vm, sp, iters)


def _dominates_below(star, option, value, I, n_grid=64) -> bool:
    """Whether the candidate option curve stays above the exercise payoff."""
    grid = np.linspace(star / n_grid, star * (1.0 - 1e-9), n_grid)
    payoff = np.maximum(np.asarray(value(grid), dtype=float) - I, 0.0)
    return bool(np.all(option(grid) >= payoff - 1e-9 * I))


def threshold_collar(scheme: Collar, market, project) -> ThresholdResult:
    return _numeric_threshold(scheme, market, project)


def threshold_floor(scheme: Floor, market, project) -> ThresholdResult:
    return _numeric_threshold(scheme, market, project)


def threshold(scheme: Scheme, market, project, reg: RegulatoryParams | None = None) -> ThresholdResult:
    """Trigger for any scheme, with or without regulatory uncertainty."""
    if reg is not None:
        return threshold_ru(scheme, market, project, reg)
    if isinstance(scheme, FixedPrice):
        return threshold_fixed_price(scheme, market, project)
    if isinstance(scheme, FixedPremium):
        return threshold_fixed_premium(scheme, market, project)
    return _numeric_threshold(scheme, market, project)


# --------------------------------------------------------------------------
# Regulatory uncertainty
# --------------------------------------------------------------------------

def reduced_scheme(scheme: Scheme, reg: RegulatoryParams) -> Scheme:
    """Contract after the tariff cut: F -> omega F (and C -> omega_C C).

    A collar whose reduced cap falls below its reduced floor always pays
    the cap, i.e. degenerates to a fixed price at ``omega_C C``.
    """
    if isinstance(scheme, Collar):
        new_F = reg.omega * scheme.F
        new_C = reg.omega_C * scheme.C
        if new_C < new_F:
            return FixedPrice(F=new_C, T=scheme.T)
        return replace(scheme, F=new_F, C=new_C)
    return replace(scheme, F=reg.omega * scheme.F)


def reduced_option_coefficient(
    scheme: Scheme, market, project, reg: RegulatoryParams
) -> float:
    """Prefactor of the option on the reduced contract, solved in stage one."""
    reduced = reduced_scheme(scheme, reg)
    inner = threshold(reduced, market, project)
    v_red = float(value_fn(reduced, market, project)(inner.trigger))
    b1, _ = beta_roots(market)
    return (v_red - project.I) * inner.trigger ** (-b1)


def threshold_ru(scheme: Scheme, market, project, reg: RegulatoryParams) -> ThresholdResult:
    if reg.lam < _LAMBDA_EPS:
        # The RU equation degenerates as eta1 -> beta1; the no-jump answer
        # is exact.
        return threshold(scheme, market, project)
    _check_waiting_region(scheme, market, project)
    red = reduced_option_coefficient(scheme, market, project, reg)
    b1, _ = beta_roots(market)
    eta1 = eta_root(market, reg.lam)
    value = value_fn(scheme, market, project)
    slope = slope_fn(scheme, market, project)
    I = project.I

    def resid(P):
        P = np.asarray(P, dtype=float)
        pb1 = P**b1
        return eta1 * (value(P) - I - red * pb1) + b1 * red * pb1 - P * slope(P)

    def admissible(star):
        # k1 is legitimately ~0 when the cut leaves the contract unchanged,
        # so reject only clearly negative coefficients.
        num = float(value(star)) - I - red * star**b1
        if num < -1e-9 * I:
            return False
        k1 = max(num, 0.0) / star**eta1
        return _dominates_below(
            star, lambda P: k1 * P**eta1 + red * P**b1, value, I
        )

    regions = _regions(scheme)
    branches = [(resid, lo, hi) for lo, hi, _ in regions]
    root, idx, iters = solve_branch_system(
        branches, free_market_trigger(market, project), admissible
    )
    vm, sp = _fit_residuals(root, scheme, market, project, reg=reg, red=red)
    return ThresholdResult(root, regions[idx][2], vm, sp, iters)


# --------------------------------------------------------------------------
# Residual reporting and option values
# --------------------------------------------------------------------------

def _fit_residuals(trigger, scheme, market, project, reg, red=None) -> tuple[float, float]:
    """Value-matching and smooth-pasting mismatches at the trigger.

    Each residual fixes the free option coefficient from the *other*
    condition, so both vanish together exactly at the true trigger.
    """
    b1, _ = beta_roots(market)
    V = float(value_fn(scheme, market, project)(trigger))
    dV = float(slope_fn(scheme, market, project)(trigger))
    I = project.I
    if reg is None or reg.lam < _LAMBDA_EPS:
        a1_sp = dV / (b1 * trigger ** (b1 - 1.0))
        vm = a1_sp * trigger**b1 - (V - I)
        a1_vm = (V - I) / trigger**b1
        sp = b1 * a1_vm * trigger ** (b1 - 1.0) - dV
        return vm, sp
    if red is None:
        red = reduced_option_coefficient(scheme, market, project, reg)
    eta1 = eta_root(market, reg.lam)
    b1_sp = (dV - b1 * red * trigger ** (b1 - 1.0)) / (eta1 * trigger ** (eta1 - 1.0))
    vm = b1_sp * trigger**eta1 + red * trigger**b1 - (V - I)
    b1_vm = (V - I - red * trigger**b1) / trigger**eta1
    sp = eta1 * b1_vm * trigger ** (eta1 - 1.0) + b1 * red * trigger ** (b1 - 1.0) - dV
    return vm, sp


def option_value(
    scheme: Scheme,
    P: float,
    market: MarketParams,
    project: ProjectParams,
    reg: RegulatoryParams | None = None,
) -> float:
    """Value of the option to invest at the current price."""
    if not P > 0.0:
        raise InvalidParametersError(f"price must be positive, got {P}")
    return option_value_curve(scheme, market, project, reg)(P)


def option_value_curve(scheme, market, project, reg=None):
    """Callable form of the option value; the trigger is solved once."""
    res = threshold(scheme, market, project, reg)
    value = value_fn(scheme, market, project)
    b1, _ = beta_roots(market)
    star = res.trigger
    v_star = float(value(star))
    I = project.I
    if reg is None or reg.lam < _LAMBDA_EPS:
        a1 = (v_star - I) / star**b1

        def curve(P):
            P = np.asarray(P, dtype=float)
            out = np.where(P < star, a1 * P**b1, value(P) - I)
            return float(out) if out.ndim == 0 else out

        return curve
    red = reduced_option_coefficient(scheme, market, project, reg)
    eta1 = eta_root(market, reg.lam)
    k1 = (v_star - I - red * star**b1) / star**eta1

    def curve(P):
        P = np.asarray(P, dtype=float)
        out = np.where(P < star, k1 * P**eta1 + red * P**b1, value(P) - I)
        return float(out) if out.ndim == 0 else out

    return curve
