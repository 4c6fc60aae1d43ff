"""Command-line interface: classification, traces, periods, scans, search."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .counterexample import counterexample_report
from .figures import FIGURE_KINDS, figure_data
from .magnetic import MagneticPoint, integrate_magnetic
from .polynomials import Polynomial, hill_intervals
from .quadrature import period_report, theta2_scan
from .reduced import classify
from .shooting import ConnectConfig, connect


def _poly(text: str) -> Polynomial:
    return Polynomial.from_json(text)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _find_hill(G: Polynomial, lo: float, hi: float, x0: float, x1: float):
    for h in hill_intervals(G, lo, hi):
        if abs(h.lo - x0) < 1e-6 and abs(h.hi - x1) < 1e-6:
            return h
    raise SystemExit(f"[{x0}, {x1}] is not a hill interval of G")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="jetgeo",
                                 description="Jet-space and magnetic-space "
                                             "geodesic toolkit")
    ap.add_argument("--seed", type=int, default=None,
                    help="seed for randomized multi-start jitter")
    ap.add_argument("--config", default=None,
                    help="JSON file with extra option overrides")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("classify", help="hill intervals and geodesic classes")
    p.add_argument("--poly", required=True, help="JSON coefficient array")
    p.add_argument("--window", nargs=2, type=float, required=True)

    p = sub.add_parser("trace", help="integrate a magnetic geodesic to CSV")
    p.add_argument("--poly", required=True)
    p.add_argument("--pencil", nargs=2, type=float, required=True)
    p.add_argument("--start", nargs=3, type=float, required=True)
    p.add_argument("--span", nargs=2, type=float, required=True)
    p.add_argument("--p-sign", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", required=True)

    p = sub.add_parser("periods", help="period/cost integrals over a hill")
    p.add_argument("--poly", required=True)
    p.add_argument("--pencil", nargs=2, type=float, required=True)
    p.add_argument("--interval", nargs=2, type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("theta-scan", help="Theta_2 scan over a pencil family")
    p.add_argument("--family", choices=("direct", "homoclinic"),
                   default="direct")
    p.add_argument("--poly", default=None,
                   help="base polynomial for the direct family")
    p.add_argument("--grid", default=None,
                   help="comma-separated parameter values")
    p.add_argument("--n", type=int, default=1,
                   help="half-degree of the homoclinic family")
    p.add_argument("--out", default=None, help="CSV output path")

    p = sub.add_parser("connect", help="two-point shooting search")
    p.add_argument("--poly", required=True)
    p.add_argument("--start", nargs=3, type=float, required=True)
    p.add_argument("--target", nargs=3, type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--grid-n", type=int, default=41)

    p = sub.add_parser("counterexample", help="odd-homoclinic shortcut report")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n-grid", default=None,
                   help="comma-separated n values")

    p = sub.add_parser("figure", help="emit figure polylines")
    p.add_argument("--kind", choices=FIGURE_KINDS, required=True)
    p.add_argument("--out", required=True, help="output directory")

    args = ap.parse_args(argv)
    cfg = _load_config(args.config)

    if args.cmd == "classify":
        F = _poly(args.poly)
        lo, hi = args.window
        hills = hill_intervals(F, lo, hi)
        out = [{"interval": [h.lo, h.hi],
                "kinds": [h.kind_lo.value, h.kind_hi.value],
                "class": classify(F, h).value} for h in hills]
        print(json.dumps(out, indent=2))
    elif args.cmd == "trace":
        F = _poly(args.poly)
        traj = integrate_magnetic(F, tuple(args.pencil),
                                  MagneticPoint(*args.start), args.p_sign,
                                  tuple(args.span), args.tol)
        traj.write_csv(args.out)
        print(f"wrote {args.out} ({len(traj.times)} samples)")
    elif args.cmd == "periods":
        F = _poly(args.poly)
        a, b = args.pencil
        G = b * F + a
        x0, x1 = args.interval
        hill = _find_hill(G, x0 - 1.0, x1 + 1.0, x0, x1)
        rep = period_report(F, (a, b), hill, args.tol)
        print(json.dumps(rep.as_dict(), indent=2, default=str))
    elif args.cmd == "theta-scan":
        F = _poly(args.poly) if args.poly else Polynomial(
            [1.0, 0.0, -24.0, 48.0, -24.0])
        grid = (np.array([float(v) for v in args.grid.split(",")])
                if args.grid else None)
        res = theta2_scan(F, args.family, grid, n=args.n)
        if args.out:
            res.write_csv(args.out)
        print(json.dumps({
            "rows": res.rows, "monotonic": res.monotonic,
            "fitted_exponent": res.fitted_exponent,
            "expected_exponent": res.expected_exponent,
            "window_used": res.window_used, "window_alt": res.window_alt,
        }, indent=2))
    elif args.cmd == "connect":
        F = _poly(args.poly)
        ccfg = ConnectConfig(grid_n=args.grid_n, match_tol=args.tol,
                             t_max=args.t_max, seed=args.seed,
                             jitter=0.25 if args.seed is not None else 0.0,
                             **cfg.get("connect", {}))
        outcome = connect(F, MagneticPoint(*args.start),
                          MagneticPoint(*args.target), ccfg)
        rows = ([outcome.best] + outcome.alternatives if outcome.accepted
                else outcome.best_effort[:5])
        print(json.dumps({
            "accepted": outcome.accepted,
            "candidates": [{"a": r.a, "b": r.b, "p_sign": r.p_sign,
                            "T": r.T, "residual": r.residual,
                            "kind": r.kind} for r in rows],
        }, indent=2))
    elif args.cmd == "counterexample":
        grid = ([float(v) for v in args.n_grid.split(",")]
                if args.n_grid else None)
        reports = counterexample_report(grid, m=args.m)
        print(json.dumps([r.as_dict() for r in reports], indent=2))
    elif args.cmd == "figure":
        paths = figure_data(args.kind, args.out, cfg.get("figure"))
        for path in paths:
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
