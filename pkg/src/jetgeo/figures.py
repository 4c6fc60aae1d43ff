"""Figure-data emission: plane-projection polylines as CSV and SVG."""

from __future__ import annotations

import csv
import math
import os

import numpy as np

from .jets import JetPoint, integrate_jet
from .magnetic import MagneticPoint, integrate_magnetic
from .polynomials import Polynomial
from .shooting import ConnectConfig, connect

__all__ = ["figure_data", "write_polyline_csv", "write_polyline_svg"]

FIGURE_KINDS = ("x-periodic", "homoclinic", "turn-back", "direct-type",
                "minimizer-sequence")


def write_polyline_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def write_polyline_svg(path, polylines, width=600, height=400, margin=20) -> None:
    """Plain SVG document with one polyline element per input point list."""
    xs = [p[0] for line in polylines for p in line]
    ys = [p[1] for line in polylines for p in line]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    sx = (width - 2 * margin) / max(x1 - x0, 1e-12)
    sy = (height - 2 * margin) / max(y1 - y0, 1e-12)
    colors = ["black", "firebrick", "steelblue", "seagreen", "darkorange"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">']
    for i, line in enumerate(polylines):
        pts = " ".join(
            f"{margin + (p[0] - x0) * sx:.2f},"
            f"{height - margin - (p[1] - y0) * sy:.2f}" for p in line)
        color = colors[i % len(colors)]
        parts.append(f'<polyline fill="none" stroke="{color}" '
                     f'stroke-width="1" points="{pts}"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))


def _magnetic_panel(F, span, start=None, p_sign=1):
    start = start or MagneticPoint(1.0, 0.0, 0.0)
    traj = integrate_magnetic(F, (0.0, 1.0), start, p_sign, span, 1e-10,
                              dt=0.01)
    return traj


def figure_data(kind: str, out_dir: str, params: dict | None = None
                ) -> list[str]:
    """Write the polylines for one figure panel; returns the file paths."""
    params = params or {}
    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []

    def emit(stem, header, rows, plane):
        csv_path = os.path.join(out_dir, stem + ".csv")
        svg_path = os.path.join(out_dir, stem + ".svg")
        write_polyline_csv(csv_path, header, rows)
        write_polyline_svg(svg_path, [plane])
        written.extend([csv_path, svg_path])

    if kind == "x-periodic":
        F = params.get("F", Polynomial([0.0, 1.0]))
        span = params.get("span", (0.0, 3.0 * 2.0 * math.pi))
        k = max(1, F.degree)
        start = JetPoint(0.0, (0.0,) * (k + 1))
        traj = integrate_jet(F, None, start, 1, span, 1e-10, dt=0.01)
        rows = np.column_stack([traj.times, traj.xs, traj.thetas[:, 0]])
        emit("x_periodic", ["t", "x", "theta0"], rows,
             list(zip(traj.xs, traj.thetas[:, 0])))
    elif kind in ("homoclinic", "turn-back", "direct-type"):
        default = {"homoclinic": Polynomial([1.0, 0.0, -2.0]),
                   "turn-back": Polynomial([1.0, 0.0, -6.0, 4.0]),
                   "direct-type": Polynomial([1.0, 0.0, -24.0, 48.0, -24.0])}[kind]
        F = params.get("F", default)
        span = params.get("span", (-8.0, 8.0))
        if kind == "homoclinic":
            start = MagneticPoint(1.0, 0.0, 0.0)
        else:
            mid = params.get("x_start", 0.5)
            start = MagneticPoint(mid, 0.0, 0.0)
        traj = _magnetic_panel(F, span, start)
        rows = np.column_stack([traj.times, traj.xs, traj.ys, traj.zs])
        emit(kind.replace("-", "_"), ["t", "x", "y", "z"], rows,
             list(zip(traj.xs, traj.ys)))
    elif kind == "minimizer-sequence":
        F = params.get("F", Polynomial([1.0, 0.0, -24.0, 48.0, -24.0]))
        ns = params.get("ns", (2, 3))
        base = _magnetic_panel(F, (-max(ns) - 1.0, max(ns) + 1.0),
                               MagneticPoint(0.5, 0.0, 0.0))
        lines = [list(zip(base.xs, base.ys))]
        rows = np.column_stack([base.times, base.xs, base.ys, base.zs])
        emit("minimizer_base", ["t", "x", "y", "z"], rows, lines[0])
        cfg = ConnectConfig(grid_n=params.get("grid_n", 13), n_refine=3,
                            coarse_samples=400, seed=params.get("seed", 0))
        for n in ns:
            lo = base.interpolate(-float(n))
            hi = base.interpolate(float(n))
            outcome = connect(F, MagneticPoint(*lo[:3]), MagneticPoint(*hi[:3]),
                              cfg)
            r = outcome.best or (outcome.best_effort[0]
                                 if outcome.best_effort else None)
            if r is None or r.kind != "normal":
                continue
            traj = integrate_magnetic(F, (r.a, r.b), MagneticPoint(*lo[:3]),
                                      r.p_sign, (0.0, r.T), 1e-9,
                                      dt=max(r.T / 2000.0, 1e-3))
            rows = np.column_stack([traj.times, traj.xs, traj.ys, traj.zs])
            stem = f"minimizer_n{n}"
            write_polyline_csv(os.path.join(out_dir, stem + ".csv"),
                               ["t", "x", "y", "z"], rows)
            written.append(os.path.join(out_dir, stem + ".csv"))
            lines.append(list(zip(traj.xs, traj.ys)))
        svg_path = os.path.join(out_dir, "minimizer_sequence.svg")
        write_polyline_svg(svg_path, lines)
        written.append(svg_path)
    else:
        raise ValueError(f"unknown figure kind {kind!r}; "
                         f"expected one of {FIGURE_KINDS}")
    return written
