# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-path kernel for the Monte Carlo oracle.

Mirrors ``fitval._kernels.profit_pv_numpy`` operation for operation:
exact lognormal steps, discounted trapezoid of the profit flow, plus the
analytic market-perpetuity tail on the terminal price.
"""

from libc.math cimport exp, log, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


def profit_pv(double[:, ::1] z, double p0, double mu, double sigma, double dt,
              double r, double quantity, int mode, double lo, double hi,
              double premium, double tail_scale):
    cdef Py_ssize_t n_paths = z.shape[0]
    cdef Py_ssize_t n_steps = z.shape[1]
    cdef Py_ssize_t i, k
    cdef double drift = (mu - 0.5 * sigma * sigma) * dt
    cdef double vol = sigma * sqrt(dt)
    cdef double log_p0 = log(p0)
    cdef double log_p, p, flow, acc

    out_arr = np.empty(n_paths, dtype=np.float64)
    cdef double[::1] out = out_arr
    disc_arr = np.empty(n_steps + 1, dtype=np.float64)
    cdef double[::1] disc = disc_arr
    for k in range(n_steps + 1):
        disc[k] = exp(-r * k * dt)

    if mode not in (0, 1):
        raise ValueError(f"unknown payoff mode {mode}")

    for i in range(n_paths):
        log_p = log_p0
        p = p0
        if mode == 0:
            flow = min(max(p, lo), hi) * quantity
        else:
            flow = (p + premium) * quantity
        acc = 0.5 * dt * flow
        for k in range(n_steps):
            log_p += drift + vol * z[i, k]
            p = exp(log_p)
            if mode == 0:
                flow = min(max(p, lo), hi) * quantity
            else:
                flow = (p + premium) * quantity
            if k == n_steps - 1:
                acc += 0.5 * dt * flow * disc[k + 1]
            else:
                acc += dt * flow * disc[k + 1]
        out[i] = acc + tail_scale * p
    return out_arr
