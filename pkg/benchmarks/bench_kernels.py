#!/usr/bin/env python3
"""Compare the accelerated kernels against the pure-NumPy fallback.

Each backend runs in its own subprocess so module-level backend selection
(via the JETGEO_DISABLE_NUMBA environment variable) is honest, and the
accelerated timing excludes one warm-up call so JIT compilation is not
billed to the steady-state number.

Usage:  python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json
import sys
import time

from jetgeo import (MagneticPoint, Polynomial, hill_intervals,
                    integrate_magnetic, period_report)
from jetgeo import _kernels

repeat = int(sys.argv[1])
F = Polynomial([1.0, 0.0, -2.0])
lin = Polynomial([0.0, 1.0])
hill = hill_intervals(lin, -2.0, 2.0)[0]

def flow():
    integrate_magnetic(F, (0.1, 0.8), MagneticPoint(0.9, 0.0, 0.0), 1,
                       (0.0, 200.0), 1e-10)

def periods():
    period_report(lin, (0.0, 1.0), hill, 1e-11)

results = {"numba": _kernels.USE_NUMBA}
for name, fn in (("flow_span_200", flow), ("period_report", periods)):
    fn()  # warm-up: triggers JIT compilation on the accelerated backend
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    results[name] = min(times)
print(json.dumps(results))
"""


def run_backend(disable_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable_numba:
        env["JETGEO_DISABLE_NUMBA"] = "1"
    else:
        env.pop("JETGEO_DISABLE_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5,
                    help="timed repetitions per case (best-of)")
    args = ap.parse_args()

    fast = run_backend(disable_numba=False, repeat=args.repeat)
    slow = run_backend(disable_numba=True, repeat=args.repeat)
    if not fast["numba"]:
        print("note: numba unavailable; both columns use the fallback")

    print(f"{'case':<20} {'accelerated':>12} {'fallback':>12} {'speedup':>9}")
    for case in ("flow_span_200", "period_report"):
        f, s = fast[case], slow[case]
        print(f"{case:<20} {f * 1e3:>10.2f}ms {s * 1e3:>10.2f}ms "
              f"{s / f:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
