"""Two-point shooting over the pencil: multi-start grid plus simplex refine.

A candidate is (a, b, p_sign) with the arrival time T chosen as the inner
minimizer of the endpoint distance along the trajectory.  The outer search
refines (a, b) by Nelder-Mead; results are ranked by T among candidates
meeting the matching tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import NotApplicable
from .magnetic import MagneticPoint, MagneticTrajectory, integrate_magnetic
from .polynomials import PencilElement, Polynomial, hill_intervals
from .reduced import GeodesicClass, classify

__all__ = ["ConnectConfig", "ConnectResult", "ConnectOutcome", "connect",
           "SignTimeReport", "sign_time"]


@dataclass
class ConnectConfig:
    grid_n: int = 41
    b_range: tuple[float, float] = (-2.0, 2.0)
    p_signs: tuple[int, ...] = (1, -1)
    t_max: float | None = None
    match_tol: float = 1e-6
    n_refine: int = 8
    coarse_samples: int = 900
    fine_samples: int = 4000
    ode_tol: float = 1e-9
    seed: int | None = None
    jitter: float = 0.0


@dataclass
class ConnectResult:
    a: float
    b: float
    p_sign: int
    T: float
    residual: float
    kind: str = "normal"  # or "abnormal"
    geo_class: GeodesicClass | None = None


@dataclass
class ConnectOutcome:
    best: ConnectResult | None
    alternatives: list[ConnectResult] = field(default_factory=list)
    accepted: bool = False
    best_effort: list[ConnectResult] = field(default_factory=list)


def _min_dist(F, a, b, p_sign, start, target, t_max, n_samples, tol):
    """Distance to target minimized over time along the (a,b,p_sign) arc."""
    try:
        traj = integrate_magnetic(F, (a, b), start, p_sign, (0.0, t_max),
                                  tol, dt=t_max / n_samples)
    except ValueError:
        return math.inf, 0.0, None
    d2 = ((traj.xs - target.x) ** 2 + (traj.ys - target.y) ** 2
          + (traj.zs - target.z) ** 2)
    i = int(np.argmin(d2))
    lo = max(i - 1, 0)
    hi = min(i + 1, len(traj.times) - 1)
    # Golden-section polish on the Hermite interpolant.
    ta, tb = float(traj.times[lo]), float(traj.times[hi])
    gr = (math.sqrt(5.0) - 1.0) / 2.0

    def dist_at(t):
        x, y, z, _p = traj.interpolate(t)
        return math.sqrt((x - target.x) ** 2 + (y - target.y) ** 2
                         + (z - target.z) ** 2)

    c = tb - gr * (tb - ta)
    d = ta + gr * (tb - ta)
    fc, fd = dist_at(c), dist_at(d)
    for _ in range(60):
        if tb - ta < 1e-12 * (1.0 + abs(tb)):
            break
        if fc < fd:
            tb, d, fd = d, c, fc
            c = tb - gr * (tb - ta)
            fc = dist_at(c)
        else:
            ta, c, fc = c, d, fd
            d = ta + gr * (tb - ta)
            fd = dist_at(d)
    t_best = 0.5 * (ta + tb)
    return dist_at(t_best), t_best, traj


def connect(F: Polynomial, start: MagneticPoint, target: MagneticPoint,
            config: ConnectConfig | None = None) -> ConnectOutcome:
    """Search for geodesics joining start to target.

    Returns the accepted candidates ranked by arrival time T (ties broken
    lexicographically by (residual, a, b)); when nothing meets the matching
    tolerance the outcome carries the best-effort ranking with
    accepted=False instead of raising.
    """
    cfg = config or ConnectConfig()
    delta = target.as_array() - start.as_array()
    if float(np.max(np.abs(delta))) == 0.0:
        raise ValueError("start and target must differ")
    t_max = cfg.t_max
    if t_max is None:
        t_max = max(5.0, 2.2 * float(np.linalg.norm(delta)))

    results: list[ConnectResult] = []

    # Abnormal candidate: vertical line through a shared critical x.
    dF = F.deriv()
    if abs(start.x - target.x) <= 1e-9 * (1.0 + abs(start.x)):
        dsup = dF.sup_norm(start.x - 1.0, start.x + 1.0)
        if abs(float(dF(start.x))) <= 1e-9 * (1.0 + dsup):
            dy = target.y - start.y
            resid = abs((target.z - start.z) - float(F(start.x)) * dy)
            results.append(ConnectResult(math.nan, math.nan, 1, abs(dy),
                                         resid, kind="abnormal"))

    f0 = float(F(start.x))
    rng = np.random.default_rng(cfg.seed if cfg.seed is not None else 0)
    bs = np.linspace(cfg.b_range[0], cfg.b_range[1], cfg.grid_n)
    gs = np.linspace(-0.999, 0.999, cfg.grid_n)
    db = bs[1] - bs[0] if cfg.grid_n > 1 else 0.0
    dg = gs[1] - gs[0] if cfg.grid_n > 1 else 0.0

    coarse = []
    for b in bs:
        for g0 in gs:
            bj = b + (rng.uniform(-0.5, 0.5) * db * cfg.jitter if cfg.jitter else 0.0)
            gj = g0 + (rng.uniform(-0.5, 0.5) * dg * cfg.jitter if cfg.jitter else 0.0)
            gj = min(0.999, max(-0.999, gj))
            a = gj - bj * f0
            for ps in cfg.p_signs:
                d, t, _traj = _min_dist(F, a, bj, ps, start, target, t_max,
                                        cfg.coarse_samples, cfg.ode_tol)
                coarse.append((d, a, bj, ps, t))
    coarse.sort(key=lambda r: r[0])

    # Refinement starts, in three tiers.  Accepted results are ranked by
    # arrival time, so plausible coarse hits (within a few percent of the
    # endpoint separation) are refined earliest-arrival first; without this
    # a crowded basin of late arrivals starves the shorter branches.  The
    # head of the global distance ranking and the best entry per
    # (p_sign, arrival-time bucket) back it up for coverage.
    thresh = max(0.05 * float(np.linalg.norm(delta)), 10.0 * cfg.match_tol)
    early = sorted((row for row in coarse if row[0] <= thresh),
                   key=lambda r: r[4])
    bucket_w = max(t_max / 20.0, 1e-9)
    per_bucket: dict[tuple[int, int], tuple] = {}
    for row in coarse:
        d, _a, _b, ps, t = row
        if not math.isfinite(d):
            continue
        key = (ps, int(round(t / bucket_w)))
        if key not in per_bucket or d < per_bucket[key][0]:
            per_bucket[key] = row
    starts = (early[: 2 * cfg.n_refine] + coarse[: 2 * cfg.n_refine]
              + sorted(per_bucket.values()))

    seen: list[tuple[float, float, int]] = []
    for d0, a0, b0, ps, _t0 in starts:
        if not math.isfinite(d0):
            continue
        if any(abs(a0 - sa) < 0.05 and abs(b0 - sb) < 0.05 and ps == sp
               for sa, sb, sp in seen):
            continue
        seen.append((a0, b0, ps))
        if len(seen) > 2 * cfg.n_refine:
            break

        def objective(ab, ps=ps):
            a, b = ab
            if abs(a + b * f0) >= 1.0:
                return 1e6 + abs(a + b * f0)
            return _min_dist(F, a, b, ps, start, target, t_max,
                             cfg.coarse_samples, cfg.ode_tol)[0]

        res = minimize(objective, [a0, b0], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14,
                                "maxiter": 400, "maxfev": 600})
        a, b = float(res.x[0]), float(res.x[1])
        if abs(a + b * f0) >= 1.0:
            continue
        dist, T, traj = _min_dist(F, a, b, ps, start, target, t_max,
                                  cfg.fine_samples, cfg.ode_tol)
        if traj is None:
            continue
        results.append(ConnectResult(a, b, ps, T, dist,
                                     geo_class=traj.geo_class))

    # Deduplicate near-identical candidates.
    unique: list[ConnectResult] = []
    for r in sorted(results, key=lambda r: (r.residual, r.T)):
        if any(r.kind == q.kind and abs(r.T - q.T) < 1e-5 * (1.0 + abs(q.T))
               and (r.kind == "abnormal"
                    or (abs(r.a - q.a) < 1e-4 and abs(r.b - q.b) < 1e-4))
               for q in unique):
            continue
        unique.append(r)

    accepted = [r for r in unique if r.residual <= cfg.match_tol]
    accepted.sort(key=lambda r: (r.T, r.residual,
                                 r.a if not math.isnan(r.a) else -math.inf,
                                 r.b if not math.isnan(r.b) else -math.inf))
    effort = sorted(unique, key=lambda r: (r.residual, r.T))
    if accepted:
        return ConnectOutcome(accepted[0], accepted[1:], True, effort)
    return ConnectOutcome(None, [], False, effort)


@dataclass
class SignTimeReport:
    T_star: float
    y_min_after: float
    y_max_before: float
    t_costy_negative: float | None = None


def sign_time(F: Polynomial, pencil: PencilElement | tuple[float, float],
              start: MagneticPoint, t_max: float = 30.0,
              tol: float = 1e-10) -> SignTimeReport:
    """Smallest T with y(t) > 0 for t in (T, t_max] and y(-t) < 0 likewise.

    Only defined for homoclinic or direct-type geodesics whose critical
    endpoints carry G = +1 (so y eventually progresses); for the homoclinic
    class the first time Cost_y(c, [-t, t]) turns negative is also reported.
    """
    if not isinstance(pencil, PencilElement):
        pencil = PencilElement(pencil[0], pencil[1], F)
    G = pencil.poly
    hill = None
    for h in hill_intervals(G, start.x - 10.0, start.x + 10.0):
        if h.contains(start.x, 1e-12):
            hill = h
            break
    if hill is None:
        raise NotApplicable("start.x lies in no hill interval of G")
    cls = classify(G, hill)
    if cls not in (GeodesicClass.HOMOCLINIC,
                   GeodesicClass.HETEROCLINIC_DIRECT_TYPE):
        raise NotApplicable(f"class {cls.value} has no sign time")
    from .polynomials import EndpointKind
    for end, kind in ((hill.lo, hill.kind_lo), (hill.hi, hill.kind_hi)):
        if kind is EndpointKind.CRITICAL and abs(float(G(end)) - 1.0) > 1e-9:
            raise NotApplicable("critical endpoint must carry G = +1")

    traj = integrate_magnetic(F, pencil, start, 1, (-t_max, t_max), tol)
    ts, ys = traj.times, traj.ys
    pos = ts > 0.0
    neg = ts < 0.0

    def last_violation(times, values, bad):
        idx = np.nonzero(bad)[0]
        if idx.size == 0:
            return 0.0
        i = idx[-1]
        if i + 1 < len(times) and not bad[i + 1]:
            # Linear refinement of the y zero between the samples.
            t0, t1 = times[i], times[i + 1]
            v0, v1 = values[i], values[i + 1]
            if v1 != v0:
                return float(t0 + (0.0 - v0) * (t1 - t0) / (v1 - v0))
        return float(times[i])

    t_pos = last_violation(ts[pos], ys[pos], ys[pos] <= 0.0)
    tm = -ts[neg][::-1]
    ym = ys[neg][::-1]
    t_neg = last_violation(tm, ym, ym >= 0.0)
    T_star = max(t_pos, t_neg)

    after = (ts > T_star + 1e-9) & pos
    before = (ts < -T_star - 1e-9) & neg
    y_min_after = float(np.min(ys[after])) if np.any(after) else math.inf
    y_max_before = float(np.max(ys[before])) if np.any(before) else -math.inf

    t_neg_cost = None
    if cls is GeodesicClass.HOMOCLINIC:
        # Cost_y over [-t, t] from the symmetric samples.
        tpos = ts[pos]
        ypos, zpos = ys[pos], traj.zs[pos]
        yneg = np.interp(-tpos, ts, ys)
        zneg = np.interp(-tpos, ts, traj.zs)
        costy = (ypos - yneg) - (zpos - zneg)
        bad = np.nonzero(costy < 0.0)[0]
        if bad.size:
            i = bad[0]
            if i > 0:
                t0, t1 = tpos[i - 1], tpos[i]
                v0, v1 = costy[i - 1], costy[i]
                t_neg_cost = float(t0 + (0.0 - v0) * (t1 - t0) / (v1 - v0))
            else:
                t_neg_cost = float(tpos[i])
    return SignTimeReport(T_star, y_min_after, y_max_before, t_neg_cost)
