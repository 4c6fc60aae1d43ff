"""Reduced 1-degree-of-freedom Hamiltonian dynamics and classification.

The reduced system at energy 1/2 is xdot = p, pdot = -G(x) G'(x) with the
invariant p^2 + G(x)^2 = 1.  Hill-interval endpoint kinds drive the
classification of the corresponding geodesics.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import _flow
from .errors import NotPeriodic, SeparatrixStall
from .polynomials import EndpointKind, HillInterval, Polynomial

__all__ = [
    "GeodesicClass",
    "ReducedState",
    "ReducedTrajectory",
    "classify",
    "integrate_reduced",
    "turning_points",
    "ode_period",
]


class GeodesicClass(enum.Enum):
    LINE = "Line"
    X_PERIODIC = "XPeriodic"
    HOMOCLINIC = "Homoclinic"
    HETEROCLINIC_TURN_BACK = "HeteroclinicTurnBack"
    HETEROCLINIC_DIRECT_TYPE = "HeteroclinicDirectType"


@dataclass(frozen=True)
class ReducedState:
    x: float
    p: float


@dataclass
class ReducedTrajectory:
    times: np.ndarray
    xs: np.ndarray
    ps: np.ndarray
    G: Polynomial
    truncated: bool = False

    @property
    def energy_residual(self) -> float:
        return float(np.max(np.abs(self.ps ** 2 + self.G(self.xs) ** 2 - 1.0)))

    def state(self, i: int) -> ReducedState:
        return ReducedState(float(self.xs[i]), float(self.ps[i]))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x", "p_x"])
            for t, x, p in zip(self.times, self.xs, self.ps):
                w.writerow([repr(float(t)), repr(float(x)), repr(float(p))])


def classify(G: Polynomial, hill: HillInterval) -> GeodesicClass:
    """Geodesic class of the libration on `hill` from endpoint kinds."""
    hill.validate(G)
    if G.degree == 0:
        return GeodesicClass.LINE
    crit_lo = hill.kind_lo is EndpointKind.CRITICAL
    crit_hi = hill.kind_hi is EndpointKind.CRITICAL
    if not crit_lo and not crit_hi:
        return GeodesicClass.X_PERIODIC
    if crit_lo != crit_hi:
        return GeodesicClass.HOMOCLINIC
    prod = float(np.round(G(hill.lo)) * np.round(G(hill.hi)))
    if prod < 0.0:
        return GeodesicClass.HETEROCLINIC_TURN_BACK
    return GeodesicClass.HETEROCLINIC_DIRECT_TYPE


def turning_points(G: Polynomial, hill: HillInterval):
    """Endpoint data: (x0, x1, (kind0, kind1)) plus the G' values."""
    hill.validate(G)
    dG = G.deriv()
    return (hill.lo, hill.hi, (hill.kind_lo, hill.kind_hi),
            (float(dG(hill.lo)), float(dG(hill.hi))))


def integrate_reduced(G: Polynomial, start: ReducedState,
                      t_span: tuple[float, float], tol: float = 1e-10,
                      dt: float = _flow.DEFAULT_DT) -> ReducedTrajectory:
    """Adaptive integration of the reduced system.

    The start state must be energy-normalized (p^2 + G(x)^2 = 1 within
    1e-12).  The state is anchored at t = 0 when the span contains 0,
    otherwise at the left end.  Near-separatrix stalls truncate the
    trajectory and set the flag instead of raising.
    """
    e0 = start.p ** 2 + float(G(start.x)) ** 2 - 1.0
    if abs(e0) > 1e-12:
        raise ValueError(f"start not on the energy-1/2 shell: residual {e0:.3g}")
    times, ys, status = _flow.span_integrate(
        G, [], [start.x, start.p], t_span[0], t_span[1], tol, dt)
    return ReducedTrajectory(times, ys[:, 0], ys[:, 1], G,
                             truncated=status != 0)


def _hermite_coeffs(t0, t1, f0, f1, d0, d1):
    h = t1 - t0
    return f0, d0, (3.0 * (f1 - f0) / h - 2.0 * d0 - d1) / h, \
        (2.0 * (f0 - f1) / h + d0 + d1) / (h * h)


def _hermite_eval(t0, c, t):
    s = t - t0
    return c[0] + s * (c[1] + s * (c[2] + s * c[3]))


def _refine_zero(t0, t1, f0, f1, d0, d1) -> float:
    c = _hermite_coeffs(t0, t1, f0, f1, d0, d1)
    return float(brentq(lambda t: _hermite_eval(t0, c, t), t0, t1,
                        xtol=1e-13, rtol=1e-15))


def ode_period(G: Polynomial, hill: HillInterval, tol: float = 1e-10) -> float:
    """Libration period measured by p-zero event detection.

    Starts at the left turning point and returns the time of the second
    momentum zero (one full libration back to the start).
    """
    if classify(G, hill) is not GeodesicClass.X_PERIODIC:
        raise NotPeriodic("period is defined for XPeriodic librations only")
    ggp = Polynomial(_flow.gg_prime(G))
    zeros: list[float] = []
    t_base = 0.0
    state = [hill.lo, 0.0]
    chunk = max(4.0, 4.0 * hill.width)
    for _round in range(64):
        traj = integrate_reduced(G, ReducedState(state[0], state[1]),
                                 (t_base, t_base + chunk), tol)
        if traj.truncated:
            raise SeparatrixStall("stalled while hunting for the period", traj)
        ps = traj.ps
        for i in range(1, len(ps)):
            if ps[i - 1] == 0.0 and traj.times[i - 1] > 1e-9:
                zeros.append(float(traj.times[i - 1]))
            elif ps[i - 1] * ps[i] < 0.0:
                d0 = -float(ggp(traj.xs[i - 1]))
                d1 = -float(ggp(traj.xs[i]))
                zeros.append(_refine_zero(traj.times[i - 1], traj.times[i],
                                          float(ps[i - 1]), float(ps[i]), d0, d1))
            if len(zeros) >= 2:
                return zeros[1]
        t_base += chunk
        state = [float(traj.xs[-1]), float(traj.ps[-1])]
    raise NotPeriodic("no libration return detected within the search horizon")
