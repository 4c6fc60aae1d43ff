"""Numerical hot loops: adaptive Runge-Kutta and tanh-sinh quadrature.

Every kernel is written as a plain Python function over NumPy arrays and
scalars, then compiled with numba when available.  Setting the environment
variable ``JETGEO_DISABLE_NUMBA=1`` (or installing without numba) selects the
uncompiled versions; results are bit-identical either way because the code
path is the same.
"""

from __future__ import annotations

import math
import os

import numpy as np

USE_NUMBA = os.environ.get("JETGEO_DISABLE_NUMBA", "0") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is an install dependency
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


_PI_OVER_2 = math.pi / 2.0

# Dormand-Prince 5(4) tableau.
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


def _polyval(c, x):
    r = 0.0
    for i in range(c.shape[0] - 1, -1, -1):
        r = r * x + c[i]
    return r


def _rhs(y, ggp, aux, naux, out):
    # y = (x, p, aux_0, ..); dx = p, dp = -(G G')(x), daux_j = aux_j(x).
    x = y[0]
    out[0] = y[1]
    out[1] = -_polyval(ggp, x)
    for j in range(naux):
        out[2 + j] = _polyval(aux[j], x)


def _ode_grid(ggp, aux, naux, y0, ts, tol, max_steps):
    """Integrate the reduced Hamiltonian system onto the output grid `ts`.

    Returns (ys, n_filled, status, n_steps).  status: 0 done, 1 step budget
    exhausted, 2 step size underflow.  The local error target shrinks with the
    span so the accumulated drift stays near `tol` even on long integrations.
    """
    nv = 2 + naux
    nout = ts.shape[0]
    ys = np.empty((nout, nv))
    for i in range(nv):
        ys[0, i] = y0[i]
    y = y0.copy()
    ynew = np.empty(nv)
    yerr = np.empty(nv)
    k1 = np.empty(nv)
    k2 = np.empty(nv)
    k3 = np.empty(nv)
    k4 = np.empty(nv)
    k5 = np.empty(nv)
    k6 = np.empty(nv)
    k7 = np.empty(nv)
    ytmp = np.empty(nv)

    t = ts[0]
    tspan = abs(ts[nout - 1] - ts[0])
    if tspan == 0.0:
        return ys, nout, 0, 0
    sgn = 1.0 if ts[nout - 1] >= ts[0] else -1.0
    h = sgn * min(1e-3 * tspan + 1e-6, 0.1)
    _rhs(y, ggp, aux, naux, k1)

    steps = 0
    iout = 1
    status = 0
    while iout < nout:
        if steps >= max_steps:
            status = 1
            break
        if abs(h) < 1e-14 * (1.0 + abs(t)):
            status = 2
            break
        hit = False
        if (t + h - ts[iout]) * sgn >= 0.0:
            h = ts[iout] - t
            hit = True
        steps += 1

        for i in range(nv):
            ytmp[i] = y[i] + h * _A21 * k1[i]
        _rhs(ytmp, ggp, aux, naux, k2)
        for i in range(nv):
            ytmp[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
        _rhs(ytmp, ggp, aux, naux, k3)
        for i in range(nv):
            ytmp[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
        _rhs(ytmp, ggp, aux, naux, k4)
        for i in range(nv):
            ytmp[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i]
                                  + _A54 * k4[i])
        _rhs(ytmp, ggp, aux, naux, k5)
        for i in range(nv):
            ytmp[i] = y[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i]
                                  + _A64 * k4[i] + _A65 * k5[i])
        _rhs(ytmp, ggp, aux, naux, k6)
        for i in range(nv):
            ynew[i] = y[i] + h * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i]
                                  + _B5 * k5[i] + _B6 * k6[i])
        _rhs(ynew, ggp, aux, naux, k7)
        for i in range(nv):
            yerr[i] = h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i]
                           + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i])

        # Error per step proportional to h/span keeps the global drift ~ tol.
        loc = tol * min(1.0, 10.0 * abs(h) / tspan)
        if loc < 1e-15:
            loc = 1e-15
        errnorm = 0.0
        for i in range(nv):
            sc = loc * (1.0 + abs(y[i]) if abs(y[i]) > abs(ynew[i])
                        else 1.0 + abs(ynew[i]))
            e = yerr[i] / sc
            errnorm += e * e
        errnorm = math.sqrt(errnorm / nv)

        if errnorm <= 1.0:
            t = t + h
            for i in range(nv):
                y[i] = ynew[i]
                k1[i] = k7[i]
            if hit:
                t = ts[iout]
                for i in range(nv):
                    ys[iout, i] = y[i]
                iout += 1
        if errnorm > 1e-30:
            fac = 0.9 * errnorm ** -0.2
            if fac < 0.2:
                fac = 0.2
            elif fac > 5.0:
                fac = 5.0
        else:
            fac = 5.0
        h = h * fac
        if abs(h) > tspan:
            h = sgn * tspan

    if status != 0:
        for j in range(iout, nout):
            for i in range(nv):
                ys[j, i] = y[i]
    return ys, iout, status, steps


def _tanh_sinh_factored(u, v, coeffs, exps, nlo, offlo, nhi, offhi,
                        tol, max_level):
    """Tanh-sinh quadrature of a product of powered polynomial factors.

    The integrand on [u, v] is prod_i s_i(x)^exps[i] where each factor is
    represented as coeffs[i] times |x - r_lo|^nlo[i] * |x - r_hi|^nhi[i];
    the root distances are computed from the endpoint offsets offlo/offhi so
    there is no cancellation when x is double-exponentially close to u or v.
    Terms are accumulated through logs to dodge intermediate under/overflow.

    Returns (value, err_estimate, status) with status 0 on convergence.
    """
    nf = coeffs.shape[0]
    halfw = 0.5 * (v - u)
    width = v - u
    if width <= 0.0:
        return 0.0, 0.0, 0
    tmax = 6.0
    prev = np.inf
    value = 0.0
    err = np.inf
    status = 1
    for level in range(2, max_level + 1):
        h = 2.0 ** (-level)
        kmax = int(tmax / h)
        total = 0.0
        for kk in range(-kmax, kmax + 1):
            t = kk * h
            warg = _PI_OVER_2 * math.sinh(t)
            if abs(warg) > 300.0:
                continue
            q = math.exp(-2.0 * abs(warg))
            dnear = width * q / (1.0 + q)
            dfar = width - dnear
            if dnear <= 0.0:
                continue
            if t >= 0.0:
                du = dfar
                dv = dnear
                x = v - dnear
            else:
                du = dnear
                dv = dfar
                x = u + dnear
            cw = math.cosh(warg)
            wq = halfw * _PI_OVER_2 * math.cosh(t) / (cw * cw) * h
            if wq <= 0.0:
                continue
            logmag = math.log(wq)
            sign = 1.0
            dead = False
            for i in range(nf):
                pv = _polyval(coeffs[i], x)
                if pv < 0.0:
                    sign = -sign
                    pv = -pv
                if pv == 0.0:
                    dead = True
                    break
                logmag += exps[i] * math.log(pv)
                if nlo[i] > 0:
                    logmag += exps[i] * nlo[i] * math.log(du + offlo[i])
                if nhi[i] > 0:
                    logmag += exps[i] * nhi[i] * math.log(dv + offhi[i])
            if dead:
                continue
            if logmag < -700.0:
                continue
            total += sign * math.exp(logmag)
        value = total
        if level > 3:
            err = abs(value - prev)
            if err <= tol * (1.0 + abs(value)):
                status = 0
                break
        prev = value
    return value, err, status


# Compiled entry points (or the plain functions when numba is disabled).
# Rebinding the private names before first use makes the compiled loops call
# the compiled helpers; with JETGEO_DISABLE_NUMBA set everything stays pure.
if USE_NUMBA:
    _polyval = njit(cache=True)(_polyval)
    _rhs = njit(cache=True)(_rhs)
    ode_grid = njit(cache=True)(_ode_grid)
    tanh_sinh_factored = njit(cache=True)(_tanh_sinh_factored)
else:
    ode_grid = _ode_grid
    tanh_sinh_factored = _tanh_sinh_factored

polyval = _polyval
