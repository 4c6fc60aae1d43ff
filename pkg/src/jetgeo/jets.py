"""The jet-space Carnot group: group law, dilations, and geodesic lifts.

Points carry coordinates (x, theta_0, ..., theta_k).  Horizontal curves obey
the Pfaffian system d theta_i = (x^i / i!) d theta_0; geodesics co-integrate
the reduced dynamics of the generating polynomial with these rates.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import _flow
from .errors import NotHillInterval
from .polynomials import HillInterval, Polynomial

__all__ = [
    "JetPoint",
    "JetTrajectory",
    "identity",
    "group_mul",
    "group_inverse",
    "carnot_dilate",
    "reflect_theta0",
    "project_plane",
    "integrate_jet",
]


@dataclass(frozen=True)
class JetPoint:
    x: float
    thetas: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.thetas) - 1

    def as_array(self) -> np.ndarray:
        return np.array([self.x, *self.thetas])


def identity(k: int) -> JetPoint:
    return JetPoint(0.0, (0.0,) * (k + 1))


def group_mul(g: JetPoint, h: JetPoint) -> JetPoint:
    """Left-translation law of J^k.

    x'' = g.x + h.x and theta''_i = g.theta_i + sum_{j<=i}
    g.x^(i-j)/(i-j)! * h.theta_j; this is the unique law making the frame
    X = d/dx, Y = sum (x^i/i!) d/dtheta_i left-invariant.
    """
    if g.k != h.k:
        raise ValueError("points must live in the same jet space")
    thetas = []
    for i in range(g.k + 1):
        acc = g.thetas[i]
        for j in range(i + 1):
            acc += g.x ** (i - j) / math.factorial(i - j) * h.thetas[j]
        thetas.append(acc)
    return JetPoint(g.x + h.x, tuple(thetas))


def group_inverse(g: JetPoint) -> JetPoint:
    thetas: list[float] = []
    for i in range(g.k + 1):
        acc = -g.thetas[i]
        for j in range(i):
            acc -= g.x ** (i - j) / math.factorial(i - j) * thetas[j]
        thetas.append(acc)
    return JetPoint(-g.x, tuple(thetas))


def carnot_dilate(g: JetPoint, u: float) -> JetPoint:
    """Carnot dilation: x -> u x, theta_i -> u^(i+1) theta_i (u > 0)."""
    if u <= 0.0:
        raise ValueError("dilation factor must be positive")
    return JetPoint(u * g.x,
                    tuple(u ** (i + 1) * th for i, th in enumerate(g.thetas)))


def reflect_theta0(g: JetPoint) -> JetPoint:
    return JetPoint(g.x, (-g.thetas[0],) + g.thetas[1:])


def project_plane(g: JetPoint) -> tuple[float, float]:
    return g.x, g.thetas[0]


@dataclass
class JetTrajectory:
    times: np.ndarray
    xs: np.ndarray
    ps: np.ndarray
    thetas: np.ndarray  # shape (n, k+1)
    F: Polynomial
    hill: HillInterval | None = None
    truncated: bool = False

    @property
    def k(self) -> int:
        return self.thetas.shape[1] - 1

    def point(self, i: int) -> JetPoint:
        return JetPoint(float(self.xs[i]), tuple(float(v) for v in self.thetas[i]))

    @property
    def energy_residual(self) -> float:
        return float(np.max(np.abs(self.ps ** 2 + self.F(self.xs) ** 2 - 1.0)))

    def horizontality_residual(self) -> float:
        """Max per-step Pfaffian defect |d theta_i - (x^i/i!) d theta_0| / dt.

        Measured against a Simpson quadrature of the rate over pairs of
        steps, which realizes the constraint at the accuracy of the sample
        grid instead of a first-order finite difference.
        """
        n = len(self.times)
        if n < 3:
            return 0.0
        worst = 0.0
        rate0 = self.F(self.xs)
        for i in range(self.thetas.shape[1]):
            g = self.xs ** i / math.factorial(i) * rate0
            for j in range(0, n - 2, 2):
                dt = self.times[j + 2] - self.times[j]
                if dt == 0.0:
                    continue
                simpson = dt / 6.0 * (g[j] + 4.0 * g[j + 1] + g[j + 2])
                resid = abs((self.thetas[j + 2, i] - self.thetas[j, i]) - simpson)
                worst = max(worst, resid / abs(dt))
        return worst

    def plane_projection(self) -> np.ndarray:
        return np.column_stack([self.xs, self.thetas[:, 0]])

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x"] + [f"theta{i}" for i in range(self.k + 1)])
            for j in range(len(self.times)):
                w.writerow([repr(float(self.times[j])), repr(float(self.xs[j]))]
                           + [repr(float(v)) for v in self.thetas[j]])


def integrate_jet(F: Polynomial, hill: HillInterval | None, start: JetPoint,
                  p_sign: int, t_span: tuple[float, float],
                  tol: float = 1e-10, dt: float = _flow.DEFAULT_DT,
                  ts: np.ndarray | None = None) -> JetTrajectory:
    """Geodesic of J^k generated by F from a jet point.

    The reduced branch is p = p_sign * sqrt(1 - F(start.x)^2); theta rates
    are theta_i' = (x^i/i!) F(x).  k is fixed by the start point and must be
    at least deg F.  The state sits at t = 0 when the span contains 0.
    """
    k = start.k
    if k < F.degree:
        raise ValueError(f"start has k={k} but deg F = {F.degree}")
    if hill is not None and not hill.contains(start.x, 1e-12 * (1.0 + hill.width)):
        raise NotHillInterval(f"x_start={start.x} outside the hill interval")
    f0 = float(F(start.x))
    if abs(f0) > 1.0:
        if abs(f0) > 1.0 + 1e-12:
            raise ValueError(f"|F(x_start)| = {abs(f0)} > 1: no real momentum")
        f0 = math.copysign(1.0, f0)
    p0 = (1 if p_sign >= 0 else -1) * math.sqrt(max(0.0, 1.0 - f0 * f0))
    aux = []
    for i in range(k + 1):
        aux.append(np.concatenate([np.zeros(i), F.coeffs / math.factorial(i)]))
    y0 = [start.x, p0, *start.thetas]
    if ts is not None:
        times, ys, status = _flow.grid_integrate(F, aux, y0, ts, tol)
    else:
        times, ys, status = _flow.span_integrate(F, aux, y0, t_span[0],
                                                 t_span[1], tol, dt)
    return JetTrajectory(times, ys[:, 0], ys[:, 1], ys[:, 2:], F, hill,
                         truncated=status != 0)
