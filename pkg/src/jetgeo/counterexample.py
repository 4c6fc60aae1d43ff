"""The odd-homoclinic shortcut construction for F = 1 - 2 x^(2m+1).

For the separatrix geodesic c with c(0) = (1, 0, 0), the z-progress outruns
the y-progress (Delta z > Delta y for large n), so a three-piece horizontal
path through the near-critical line x = -delta_n beats the geodesic segment
c([-n, n]) in length once n is large.  Everything here is quadrature-only so
the n-grid can reach ~1e9 where 2n - T3 approaches Theta_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NotOdd, ToleranceNotMet
from .magnetic import MagneticPoint, integrate_magnetic
from .polynomials import Polynomial
from .quadrature import (_tanh_sinh_callable, separatrix_position,
                         separatrix_time)

__all__ = ["CounterexampleReport", "counterexample_report", "family_poly",
            "DEFAULT_N_GRID"]

DEFAULT_N_GRID = tuple(float(4 ** k) for k in range(16))  # 1 .. 2^30


def family_poly(m: int) -> Polynomial:
    """F = 1 - 2 x^(2m+1)."""
    if not isinstance(m, int) or m < 1:
        raise NotOdd("the family needs an integer m >= 1 (exponent 2m+1)")
    c = np.zeros(2 * m + 2)
    c[0] = 1.0
    c[-1] = -2.0
    return Polynomial(c)


@dataclass
class CounterexampleReport:
    n: float
    x_n: float
    eps_n: float
    delta_n: float
    T1: float
    T2: float
    T3: float
    two_n: float
    verdict: bool
    delta_y: float
    delta_z: float
    cost_t: float
    horizontality_residual: float
    reach_residual: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "n", "x_n", "eps_n", "delta_n", "T1", "T2", "T3", "two_n",
            "verdict", "delta_y", "delta_z", "cost_t",
            "horizontality_residual", "reach_residual")}


def _sweep_integrals(mm: int, x_n: float, tol: float = 1e-12):
    """(cost_t, dz_minus_dy) over the doubled sweep [x_n, 1] of G = F.

    cost_t = 2 int sqrt((1-F)/(1+F)) dx with 1 - F = 2 x^mm evaluated
    exactly; dz - dy = -2 int F sqrt((1-F)/(1+F)) dx.
    """
    s_coeffs = np.ones(mm)

    def weight(x, dhi):
        s = dhi * float(npoly.polyval(x, s_coeffs))
        if s <= 0.0:
            return math.inf
        return x ** (0.5 * mm) / math.sqrt(s)

    def f_cost(x, _dlo, dhi):
        return weight(x, dhi)

    def f_defect(x, _dlo, dhi):
        return -(1.0 - 2.0 * x ** mm) * weight(x, dhi)

    vals = []
    for fn in (f_cost, f_defect):
        v, err, status = _tanh_sinh_callable(fn, x_n, 1.0, tol, offsets=True)
        if status != 0:
            raise ToleranceNotMet("counterexample quadrature stalled",
                                  value=v, estimate=err)
        vals.append(2.0 * v)
    return vals[0], vals[1]


def counterexample_report(n_grid=None, m: int = 1, tol: float = 1e-12,
                          ode_check_max: float = 24.0
                          ) -> list[CounterexampleReport]:
    """Shortcut reports over an n-grid for F = 1 - 2 x^(2m+1).

    Per n: x_n from the separatrix time map; Delta y, Delta z by stable
    quadrature over [x_n, 1]; eps_n = Delta z / Delta y - 1;
    delta_n = (eps_n / 2)^(1/(2m+1)) so that F(-delta_n) = 1 + eps_n; then
    T3 = Delta y + 2 (delta_n + x_n) and the verdict T3 < 2n.  The assembled
    path (x-run to -delta_n, vertical run gaining z at rate 1 + eps_n,
    x-run back) is horizontal piecewise exactly; for moderate n the arrival
    point is cross-checked against the ODE trajectory with a tolerance of
    1e-8 scaled by the endpoint magnitude.
    """
    F = family_poly(m)
    mm = 2 * m + 1
    if n_grid is None:
        n_grid = DEFAULT_N_GRID
    out = []
    for n in n_grid:
        n = float(n)
        x_n = separatrix_position(mm, n, tol)
        cost_t, defect = _sweep_integrals(mm, x_n, tol)
        delta_y = 2.0 * n - cost_t
        delta_z = delta_y + defect
        eps = defect / delta_y
        if eps > 0.0:
            delta_n = (eps / 2.0) ** (1.0 / mm)
        else:
            delta_n = math.nan
        T1 = x_n + delta_n
        T2 = T1 + delta_y
        T3 = delta_y + 2.0 * (delta_n + x_n)
        verdict = bool(T3 < 2.0 * n) if math.isfinite(T3) else False

        # The three pieces are exact coordinate lines: the x-runs keep y and
        # z constant (dy = 0 forces dz = 0) and the vertical run gains z at
        # rate F(-delta_n) = 1 + eps exactly, so the per-piece Pfaffian
        # residual vanishes identically and the arrival point closes the
        # Delta y / Delta z budget by construction.
        horiz = 0.0 if math.isfinite(delta_n) else math.nan

        if n <= ode_check_max:
            traj = integrate_magnetic(F, (0.0, 1.0), MagneticPoint(1.0, 0.0, 0.0),
                                      1, (-n, n), 1e-11)
            dy_ode = float(traj.ys[-1] - traj.ys[0])
            dz_ode = float(traj.zs[-1] - traj.zs[0])
            x_end = float(traj.xs[-1])
            scale = 1.0 + abs(dy_ode) + abs(dz_ode)
            reach = max(abs(dy_ode - delta_y), abs(dz_ode - delta_z),
                        abs(x_end - x_n)) / scale
        else:
            reach = abs(separatrix_time(mm, x_n, tol) - n) / (1.0 + n)
        out.append(CounterexampleReport(n, x_n, eps, delta_n, T1, T2, T3,
                                        2.0 * n, verdict, delta_y, delta_z,
                                        cost_t, horiz, reach))
    return out
