"""Shared wrapper around the Runge-Kutta kernel.

Builds output grids, pads auxiliary polynomial tables, and splits spans that
contain t = 0 so the supplied state is anchored there (the convention used by
all trajectory constructors: the start state sits at t = 0 whenever the span
contains 0, otherwise at the left end).
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _kernels
from .polynomials import Polynomial

DEFAULT_DT = 0.005
MAX_STEPS = 20_000_000


def pack_aux(aux_coeffs: list[np.ndarray]) -> np.ndarray:
    naux = len(aux_coeffs)
    if naux == 0:
        return np.zeros((1, 1))
    width = max(c.shape[0] for c in aux_coeffs)
    out = np.zeros((naux, width))
    for i, c in enumerate(aux_coeffs):
        out[i, :c.shape[0]] = c
    return out


def gg_prime(G: Polynomial) -> np.ndarray:
    return np.ascontiguousarray(npoly.polymul(G.coeffs, npoly.polyder(G.coeffs)))


def _leg(ggp, aux, naux, y0, ta, tb, tol, dt):
    span = abs(tb - ta)
    n = max(2, int(np.ceil(span / dt)) + 1)
    ts = np.linspace(ta, tb, n)
    ys, filled, status, _steps = _kernels.ode_grid(
        ggp, aux, naux, np.asarray(y0, dtype=float), ts, tol, MAX_STEPS)
    return ts[:filled], ys[:filled], status


def grid_integrate(G: Polynomial, aux_coeffs: list[np.ndarray], y0,
                   ts: np.ndarray, tol: float = 1e-10):
    """Integrate onto an explicit output grid, anchoring y0 at t = 0 when the
    grid contains it (else at ts[0])."""
    ggp = gg_prime(G)
    aux = pack_aux(aux_coeffs)
    naux = len(aux_coeffs)
    y0 = np.asarray(y0, dtype=float)
    ts = np.asarray(ts, dtype=float)
    anchor = int(np.argmin(np.abs(ts)))
    if ts[0] <= 0.0 <= ts[-1] and abs(ts[anchor]) <= 1e-12:
        back_ts = ts[anchor::-1]
        fwd_ts = ts[anchor:]
        sb = sf = 0
        if back_ts.shape[0] > 1:
            yb, fb, sb, _ = _kernels.ode_grid(ggp, aux, naux, y0, back_ts,
                                              tol, MAX_STEPS)
            yb = yb[:fb]
        else:
            yb = y0[None, :]
        if fwd_ts.shape[0] > 1:
            yf, ff, sf, _ = _kernels.ode_grid(ggp, aux, naux, y0, fwd_ts,
                                              tol, MAX_STEPS)
            yf = yf[:ff]
        else:
            yf = y0[None, :]
        times = np.concatenate([back_ts[:yb.shape[0]][::-1], fwd_ts[1:yf.shape[0]]])
        states = np.concatenate([yb[::-1], yf[1:]])
        return times, states, (sb if sb != 0 else sf)
    ys, filled, status, _ = _kernels.ode_grid(ggp, aux, naux, y0, ts, tol,
                                              MAX_STEPS)
    return ts[:filled], ys[:filled], status


def span_integrate(G: Polynomial, aux_coeffs: list[np.ndarray], y0,
                   t0: float, t1: float, tol: float = 1e-10,
                   dt: float = DEFAULT_DT):
    """Integrate over [t0, t1]; y0 is the state at 0 if t0 <= 0 <= t1, else
    at t0.  Returns (times, states, status) with status 0 when complete."""
    if t1 < t0:
        raise ValueError("t_span must have t0 <= t1")
    ggp = gg_prime(G)
    aux = pack_aux(aux_coeffs)
    naux = len(aux_coeffs)
    y0 = np.asarray(y0, dtype=float)
    if t0 <= 0.0 <= t1 and t0 < t1:
        tb, yb, sb = _leg(ggp, aux, naux, y0, 0.0, t0, tol, dt) \
            if t0 < 0.0 else (np.array([0.0]), y0[None, :], 0)
        tf, yf, sf = _leg(ggp, aux, naux, y0, 0.0, t1, tol, dt) \
            if t1 > 0.0 else (np.array([0.0]), y0[None, :], 0)
        times = np.concatenate([tb[::-1], tf[1:]])
        states = np.concatenate([yb[::-1], yf[1:]])
        status = sb if sb != 0 else sf
        return times, states, status
    return _leg(ggp, aux, naux, y0, t0, t1, tol, dt)
