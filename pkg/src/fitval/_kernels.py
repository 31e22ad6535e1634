"""Hot-loop backend for the Monte Carlo oracle.

The per-path work (exact lognormal stepping, discounted trapezoid of the
profit flow, analytic perpetuity tail) is available as a compiled Cython
kernel and as a pure-numpy fallback.  Both consume the same matrix of
standard normal increments, so estimates agree to rounding noise; the
compiled kernel is simply faster.  Selection happens once at import.
"""

from __future__ import annotations

import math

import numpy as np

MODE_CLIPPED = 0
MODE_PREMIUM = 1


def _discount_weights(n_steps: int, dt: float, r: float) -> np.ndarray:
    """Trapezoid weights times the discount factor on the step grid."""
    t = np.arange(n_steps + 1) * dt
    w = np.full(n_steps + 1, dt)
    w[0] = w[-1] = 0.5 * dt
    return w * np.exp(-r * t)


def profit_pv_numpy(
    z: np.ndarray,
    p0: float,
    mu: float,
    sigma: float,
    dt: float,
    r: float,
    quantity: float,
    mode: int,
    lo: float,
    hi: float,
    premium: float,
    tail_scale: float,
) -> np.ndarray:
    """Per-path present value of the contract profit plus the market tail.

    ``z`` has shape (n_paths, n_steps); paths start at ``p0`` and step by
    exact lognormal increments.  ``tail_scale`` multiplies the terminal
    price (analytic post-contract perpetuity, discounted to time zero).
    """
    n_paths, n_steps = z.shape
    drift = (mu - 0.5 * sigma * sigma) * dt
    vol = sigma * math.sqrt(dt)
    log_p = np.empty((n_paths, n_steps + 1))
    log_p[:, 0] = math.log(p0)
    np.cumsum(drift + vol * z, axis=1, out=log_p[:, 1:])
    log_p[:, 1:] += math.log(p0)
    prices = np.exp(log_p)
    if mode == MODE_CLIPPED:
        flows = np.clip(prices, lo, hi) * quantity
    elif mode == MODE_PREMIUM:
        flows = (prices + premium) * quantity
    else:
        raise ValueError(f"unknown payoff mode {mode}")
    weights = _discount_weights(n_steps, dt, r)
    return flows @ weights + tail_scale * prices[:, -1]


try:
    from ._pathkernel import profit_pv as profit_pv_compiled

    profit_pv = profit_pv_compiled
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    profit_pv = profit_pv_numpy
    BACKEND = "numpy"
