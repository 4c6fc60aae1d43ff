"""The 3D magnetic space: projections from jet space, geodesics, lifts.

Curves live in coordinates (x, y, z) with the Pfaffian constraint
dz = F(x) dy and metric dx^2 + dy^2.  Geodesics come from pencil elements
G = a + bF: ydot = G(x), zdot = G(x) F(x) over the reduced dynamics of G.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _flow
from .errors import (NotCriticalPoint, NotPeriodic, NotSymmetric,
                     StartMismatch)
from .jets import JetPoint, JetTrajectory, integrate_jet
from .polynomials import HillInterval, PencilElement, Polynomial, hill_intervals
from .reduced import GeodesicClass, classify

__all__ = [
    "MagneticPoint",
    "MagneticTrajectory",
    "project_pi_F",
    "project_pr",
    "project_jet_trajectory",
    "integrate_magnetic",
    "lift_to_jet",
    "abnormal_curve",
    "cut_time_bound",
    "maxwell_partner",
]


@dataclass(frozen=True)
class MagneticPoint:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def project_pi_F(F: Polynomial, g: JetPoint) -> MagneticPoint:
    """Submersion J^k -> R^3_F: (x, theta) -> (x, theta_0, sum l! a_l theta_l).

    The factorial weights make dz - F(x) dy vanish along every horizontal
    jet curve, since d theta_l = (x^l / l!) d theta_0.
    """
    if F.degree > g.k:
        raise ValueError("deg F must not exceed the jet order k")
    z = 0.0
    for ell, a in enumerate(F.coeffs):
        z += math.factorial(ell) * a * g.thetas[ell]
    return MagneticPoint(g.x, g.thetas[0], z)


def project_pr(pt: MagneticPoint) -> tuple[float, float]:
    return pt.x, pt.y


@dataclass
class MagneticTrajectory:
    times: np.ndarray
    xs: np.ndarray
    ps: np.ndarray
    ys: np.ndarray
    zs: np.ndarray
    F: Polynomial
    pencil: PencilElement
    geo_class: GeodesicClass | None = None
    truncated: bool = False

    @property
    def G(self) -> Polynomial:
        return self.pencil.poly

    def point(self, i: int) -> MagneticPoint:
        return MagneticPoint(float(self.xs[i]), float(self.ys[i]),
                             float(self.zs[i]))

    @property
    def energy_residual(self) -> float:
        return float(np.max(np.abs(self.ps ** 2 + self.G(self.xs) ** 2 - 1.0)))

    def horizontality_residual(self) -> float:
        """Max per-step |dz - F(x) dy| / dt via Simpson over step pairs."""
        n = len(self.times)
        if n < 3:
            return 0.0
        g = self.F(self.xs) * self.G(self.xs)
        worst = 0.0
        for j in range(0, n - 2, 2):
            dt = self.times[j + 2] - self.times[j]
            if dt == 0.0:
                continue
            simpson = dt / 6.0 * (g[j] + 4.0 * g[j + 1] + g[j + 2])
            resid = abs((self.zs[j + 2] - self.zs[j]) - simpson)
            worst = max(worst, resid / abs(dt))
        return worst

    def recovered_pencil(self) -> tuple[float, float]:
        """Least-squares (a, b) refit of ydot = G(x) against (1, F(x)).

        |ydot| comes from the conserved energy (sqrt(1 - p^2), accurate to
        the integrator drift); its sign comes from the local slope of y, so
        only samples with |ydot| > 0.1 (unambiguous sign) are kept.  Falls
        back to midpoint finite differences when too few samples qualify.
        """
        n = len(self.times)
        mags = np.sqrt(np.clip(1.0 - self.ps ** 2, 0.0, None))
        if n >= 3:
            dt2 = self.times[2:] - self.times[:-2]
            ok = dt2 != 0.0
            slopes = np.divide(self.ys[2:] - self.ys[:-2],
                               np.where(ok, dt2, 1.0), where=ok,
                               out=np.zeros(n - 2))
            keep = ok & (mags[1:-1] > 0.1)
            if np.count_nonzero(keep) >= 8:
                g = np.where(slopes[keep] >= 0.0, 1.0, -1.0) * mags[1:-1][keep]
                x = self.xs[1:-1][keep]
                A = np.column_stack([np.ones(x.shape[0]), self.F(x)])
                sol, *_ = np.linalg.lstsq(A, g, rcond=None)
                return float(sol[0]), float(sol[1])
        dts = np.diff(self.times)
        keep = dts != 0.0
        ydots = np.diff(self.ys)[keep] / dts[keep]
        xm = 0.5 * (self.xs[1:] + self.xs[:-1])[keep]
        A = np.column_stack([np.ones(xm.shape[0]), self.F(xm)])
        sol, *_ = np.linalg.lstsq(A, ydots, rcond=None)
        return float(sol[0]), float(sol[1])

    def interpolate(self, t: float) -> np.ndarray:
        """Cubic Hermite interpolation of (x, y, z, p) at time t."""
        ts = self.times
        i = int(np.searchsorted(ts, t)) - 1
        i = min(max(i, 0), len(ts) - 2)
        t0, t1 = ts[i], ts[i + 1]
        h = t1 - t0
        if h == 0.0:
            return np.array([self.xs[i], self.ys[i], self.zs[i], self.ps[i]])
        G = self.G
        ggp = Polynomial(_flow.gg_prime(G))
        out = np.empty(4)
        vals = ((self.xs, lambda j: self.ps[j]),
                (self.ys, lambda j: float(G(self.xs[j]))),
                (self.zs, lambda j: float(G(self.xs[j]) * self.F(self.xs[j]))),
                (self.ps, lambda j: -float(ggp(self.xs[j]))))
        s = t - t0
        for idx, (arr, dfun) in enumerate(vals):
            f0, f1 = arr[i], arr[i + 1]
            d0, d1 = dfun(i), dfun(i + 1)
            c2 = (3.0 * (f1 - f0) / h - 2.0 * d0 - d1) / h
            c3 = (2.0 * (f0 - f1) / h + d0 + d1) / (h * h)
            out[idx] = f0 + s * (d0 + s * (c2 + s * c3))
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x", "y", "z"])
            for j in range(len(self.times)):
                w.writerow([repr(float(self.times[j])), repr(float(self.xs[j])),
                            repr(float(self.ys[j])), repr(float(self.zs[j]))])


def integrate_magnetic(F: Polynomial, pencil: PencilElement | tuple[float, float],
                       start: MagneticPoint, p_sign: int,
                       t_span: tuple[float, float], tol: float = 1e-10,
                       dt: float = _flow.DEFAULT_DT) -> MagneticTrajectory:
    """Geodesic of R^3_F for a pencil element from a magnetic point.

    Requires |G(start.x)| <= 1 so the momentum branch
    p = p_sign sqrt(1 - G^2) is real.  The state is anchored at t = 0 when
    the span contains 0, else at the left end.
    """
    if not isinstance(pencil, PencilElement):
        pencil = PencilElement(pencil[0], pencil[1], F)
    G = pencil.poly
    g0 = float(G(start.x))
    if abs(g0) > 1.0 + 1e-12:
        raise ValueError(f"|G(start.x)| = {abs(g0)} > 1: no real momentum")
    g0 = min(1.0, max(-1.0, g0))
    p0 = (1 if p_sign >= 0 else -1) * math.sqrt(max(0.0, 1.0 - g0 * g0))
    aux = [G.coeffs, np.ascontiguousarray(npoly.polymul(G.coeffs, F.coeffs))]
    y0 = [start.x, p0, start.y, start.z]
    times, ys, status = _flow.span_integrate(G, aux, y0, t_span[0], t_span[1],
                                             tol, dt)
    geo = None
    try:
        for h in hill_intervals(G, start.x - 10.0, start.x + 10.0):
            if h.contains(start.x, 1e-12):
                geo = classify(G, h)
                break
    except Exception:
        geo = None
    return MagneticTrajectory(times, ys[:, 0], ys[:, 1], ys[:, 2], ys[:, 3],
                              F, pencil, geo, truncated=status != 0)


def project_jet_trajectory(F: Polynomial, jt: JetTrajectory,
                           pencil: PencilElement | None = None
                           ) -> MagneticTrajectory:
    """Pointwise pi_F image of a jet trajectory."""
    if F.degree > jt.k:
        raise ValueError("deg F must not exceed the jet order k")
    weights = np.array([math.factorial(ell) * a
                        for ell, a in enumerate(F.coeffs)])
    zs = jt.thetas[:, :weights.shape[0]] @ weights
    if pencil is None:
        pencil = PencilElement(0.0, 1.0, F)
    return MagneticTrajectory(jt.times.copy(), jt.xs.copy(), jt.ps.copy(),
                              jt.thetas[:, 0].copy(), zs, F, pencil,
                              truncated=jt.truncated)


def lift_to_jet(F: Polynomial, c: MagneticTrajectory, G: Polynomial,
                start: JetPoint, tol: float = 1e-10) -> JetTrajectory:
    """Horizontal lift of a magnetic geodesic to J^k through `start`.

    `start` must project (via pi_F) onto c's anchor sample: the t = 0 sample
    when the span contains 0, else the first sample.
    """
    t0, t1 = float(c.times[0]), float(c.times[-1])
    anchor = int(np.argmin(np.abs(c.times))) if t0 <= 0.0 <= t1 else 0
    proj = project_pi_F(F, start)
    ref = c.point(anchor)
    err = max(abs(proj.x - ref.x), abs(proj.y - ref.y), abs(proj.z - ref.z))
    if err > 1e-9 * (1.0 + abs(ref.y) + abs(ref.z)):
        raise StartMismatch(f"start projects {err:.3g} away from the anchor")
    p_sign = 1 if c.ps[anchor] >= 0.0 else -1
    return integrate_jet(G, None, start, p_sign, (t0, t1), tol,
                         ts=np.asarray(c.times, dtype=float))


def abnormal_curve(F: Polynomial, x_star: float, start: MagneticPoint,
                   t_span: tuple[float, float], dt: float = 0.01
                   ) -> MagneticTrajectory:
    """The abnormal geodesic through a critical point of F: a vertical line
    (x_star, y0 + t, z0 + F(x_star) t)."""
    dF = F.deriv()
    if abs(float(dF(x_star))) > 1e-9 * (1.0 + dF.sup_norm(x_star - 1.0,
                                                          x_star + 1.0)):
        raise NotCriticalPoint(f"F'({x_star}) != 0")
    if abs(start.x - x_star) > 1e-12 * (1.0 + abs(x_star)):
        raise ValueError("start must sit at x_star")
    n = max(2, int(math.ceil((t_span[1] - t_span[0]) / dt)) + 1)
    ts = np.linspace(t_span[0], t_span[1], n)
    anchor = 0.0 if t_span[0] <= 0.0 <= t_span[1] else t_span[0]
    off = ts - anchor
    f0 = float(F(x_star))
    pencil = PencilElement(1.0, 0.0, F)
    return MagneticTrajectory(ts, np.full(n, x_star), np.zeros(n),
                              start.y + off, start.z + f0 * off,
                              F, pencil, GeodesicClass.LINE)


def cut_time_bound(F: Polynomial, pencil: PencilElement | tuple[float, float],
                   hill: HillInterval, tol: float = 1e-10) -> float:
    """Upper bound L(G, I) for the cut time, halved for even F with 0 in I."""
    from .quadrature import period_report

    if not isinstance(pencil, PencilElement):
        pencil = PencilElement(pencil[0], pencil[1], F)
    G = pencil.poly
    if classify(G, hill) is not GeodesicClass.X_PERIODIC:
        raise NotPeriodic("cut-time bound applies to XPeriodic geodesics")
    L = period_report(F, pencil, hill, tol).L
    if F.is_even() and hill.contains(0.0):
        return L / 2.0
    return L


def maxwell_partner(F: Polynomial, pencil: PencilElement | tuple[float, float],
                    start: MagneticPoint, p_sign: int = 1,
                    t_span: tuple[float, float] | None = None,
                    tol: float = 1e-10) -> MagneticTrajectory:
    """Reflected partner geodesic for even F on a symmetric hill.

    The x -> -x reflection maps geodesics to geodesics when F (hence G) is
    even; the partner starts at (-x0, y0, z0) with flipped momentum sign and
    reaches the same endpoint as the original at t = L/2 when both start on
    the symmetry axis.
    """
    if not isinstance(pencil, PencilElement):
        pencil = PencilElement(pencil[0], pencil[1], F)
    if not F.is_even():
        raise NotSymmetric("F must be even")
    G = pencil.poly
    hill = None
    for h in hill_intervals(G, start.x - 10.0, start.x + 10.0):
        if h.contains(start.x, 1e-12):
            hill = h
            break
    if hill is None or abs(hill.lo + hill.hi) > 1e-9 * (1.0 + hill.width):
        raise NotSymmetric("hill interval must be symmetric about 0")
    if t_span is None:
        t_span = (0.0, cut_time_bound(F, pencil, hill, tol))
    mirrored = MagneticPoint(-start.x, start.y, start.z)
    return integrate_magnetic(F, pencil, mirrored, -p_sign, t_span, tol)
