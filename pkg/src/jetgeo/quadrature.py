"""Singularity-aware quadrature for the period and cost integrals.

All integrands are products of powered polynomial factors over a hill
interval; the only singularities sit at the endpoints where 1 -/+ G vanishes.
Finiteness is decided a priori from the root multiplicities, never by letting
the quadrature blow up.  Near-endpoint roots are factored out symbolically so
node values can be computed without cancellation arbitrarily close to the
endpoints.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _kernels
from .errors import NotHillInterval, ToleranceNotMet
from .polynomials import (HillInterval, PencilElement, Polynomial, hill_intervals,
                          real_roots)

__all__ = [
    "TravelInterval",
    "PeriodReport",
    "CostReport",
    "ScanResult",
    "integrate_endpoint_singular",
    "period_report",
    "cost_over_travel",
    "theta2_scan",
    "separatrix_time",
    "separatrix_position",
]

_PI_OVER_2 = math.pi / 2.0


# ---------------------------------------------------------------------------
# Factored tanh-sinh machinery


@dataclass
class _Entry:
    coeffs: np.ndarray
    exp: float
    nlo: int = 0
    offlo: float = 0.0
    nhi: int = 0
    offhi: float = 0.0


def _build_entries(parts, u: float, v: float) -> list[_Entry]:
    """Split each (polynomial, exponent) factor into endpoint-root pieces.

    Roots within 5% of the interval of either endpoint are pulled out as
    exact |x - r| factors (kept as a distance-plus-offset so that node values
    stay accurate at double-exponential distances); the deflated remainder
    stays a plain polynomial.  Interior roots are only legal for positive
    integer exponents.
    """
    width = v - u
    entries: list[_Entry] = []
    for P, e in parts:
        c = P.coeffs.copy()
        if c.shape[0] == 1:
            entries.append(_Entry(c, e))
            continue
        near = 0.06 * width
        roots = real_roots(Polynomial(c), u - near, v + near)
        for r, m in roots:
            on_lo = abs(r - u) <= abs(r - v)
            off = (u - r) if on_lo else (r - v)
            if off < -1e-9 * max(1.0, width):
                # Genuinely interior root.
                if e != round(e) or e < 0:
                    raise ValueError(
                        f"integrand factor singular at interior root x={r:.6g}")
                continue
            if off < 0.0 or abs(off) <= 64.0 * np.finfo(float).eps * max(abs(r), abs(u if on_lo else v)):
                off = 0.0
            if off > 0.05 * width:
                continue
            for _ in range(m):
                c = np.ascontiguousarray(npoly.polydiv(c, np.array([-r, 1.0]))[0])
            if not on_lo and m % 2 == 1:
                c = -c
            if on_lo:
                entries.append(_Entry(np.array([1.0]), e, nlo=m, offlo=off))
            else:
                entries.append(_Entry(np.array([1.0]), e, nhi=m, offhi=off))
        entries.append(_Entry(c, e))
    return entries


def _singular_exponents(entries) -> tuple[float, float]:
    pd = 0.0
    pe = 0.0
    for en in entries:
        if en.nlo > 0 and en.offlo == 0.0:
            pd += en.exp * en.nlo
        if en.nhi > 0 and en.offhi == 0.0:
            pe += en.exp * en.nhi
    return pd, pe


def _eval_entries(entries, x: float, u: float, v: float) -> float:
    out = 1.0
    for en in entries:
        pv = float(npoly.polyval(x, en.coeffs))
        if en.nlo > 0:
            pv *= ((x - u) + en.offlo) ** en.nlo
        if en.nhi > 0:
            pv *= ((v - x) + en.offhi) ** en.nhi
        out *= math.copysign(abs(pv) ** en.exp, pv) if en.exp != 1.0 else pv
    return out


def _integrate_factored(parts, u: float, v: float, tol: float = 1e-12
                        ) -> tuple[float, float, bool]:
    """Integrate prod P_i^{e_i} over [u, v]; returns (value, err, finite)."""
    if v <= u:
        return 0.0, 0.0, True
    entries = _build_entries(parts, u, v)
    pd, pe = _singular_exponents(entries)
    width = v - u
    div_lo = pd <= -1.0 + 1e-9
    div_hi = pe <= -1.0 + 1e-9
    if div_lo or div_hi:
        signs = []
        if div_lo:
            signs.append(math.copysign(1.0, _eval_entries(entries, u + 1e-4 * width, u, v)))
        if div_hi:
            signs.append(math.copysign(1.0, _eval_entries(entries, v - 1e-4 * width, u, v)))
        if len(signs) == 2 and signs[0] != signs[1]:
            return math.nan, math.inf, False
        return signs[0] * math.inf, math.inf, False

    nf = len(entries)
    maxlen = max(en.coeffs.shape[0] for en in entries)
    coeffs = np.zeros((nf, maxlen))
    exps = np.empty(nf)
    nlo = np.zeros(nf, dtype=np.int64)
    nhi = np.zeros(nf, dtype=np.int64)
    offlo = np.zeros(nf)
    offhi = np.zeros(nf)
    for i, en in enumerate(entries):
        coeffs[i, :en.coeffs.shape[0]] = en.coeffs
        exps[i] = en.exp
        nlo[i] = en.nlo
        nhi[i] = en.nhi
        offlo[i] = en.offlo
        offhi[i] = en.offhi
    value, err, status = _kernels.tanh_sinh_factored(
        u, v, coeffs, exps, nlo, offlo, nhi, offhi, tol, 12)
    if status != 0 and not (err <= 100.0 * tol * (1.0 + abs(value))):
        raise ToleranceNotMet(
            f"quadrature stalled at err={err:.3g}", value=value, estimate=err)
    return value, err, True


def _tanh_sinh_callable(f, a: float, b: float, tol: float = 1e-12,
                        offsets: bool = False, max_level: int = 12):
    """Adaptive tanh-sinh rule for a black-box integrand.

    With offsets=True the integrand is called as f(x, d_lo, d_hi) where the
    distances to the endpoints are computed in a cancellation-free way; this
    is how singular integrands should consume their endpoint behavior.
    Non-finite node values (endpoint blow-ups) are skipped.
    """
    halfw = 0.5 * (b - a)
    width = b - a
    if width <= 0.0:
        return 0.0, 0.0, 0
    prev = math.inf
    value = 0.0
    err = math.inf
    status = 1
    for level in range(2, max_level + 1):
        h = 2.0 ** (-level)
        kmax = int(6.0 / h)
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
                dlo, dhi = dfar, dnear
                x = b - dnear
            else:
                dlo, dhi = dnear, dfar
                x = a + dnear
            cw = math.cosh(warg)
            wq = halfw * _PI_OVER_2 * math.cosh(t) / (cw * cw) * h
            fx = f(x, dlo, dhi) if offsets else f(x)
            if not math.isfinite(fx):
                continue
            total += wq * fx
        value = total
        if level > 3:
            err = abs(value - prev)
            if err <= tol * (1.0 + abs(value)):
                status = 0
                break
        prev = value
    return value, err, status


def integrate_endpoint_singular(f, lo: float, hi: float, order_lo: float = 0.0,
                                order_hi: float = 0.0, tol: float = 1e-12,
                                offsets: bool = False) -> tuple[float, float]:
    """Integrate f over [lo, hi] allowing algebraic endpoint singularities.

    order_lo/order_hi give the growth exponent alpha at each end, meaning
    f ~ C * d^(-alpha) at distance d; alpha >= 1 is non-integrable and the
    integral is reported as a signed infinity without quadrature.  Pass
    offsets=True to receive (x, d_lo, d_hi) and evaluate near-endpoint
    expressions without cancellation.
    """
    if order_lo >= 1.0 or order_hi >= 1.0:
        width = hi - lo
        probes = []
        if order_lo >= 1.0:
            x = lo + 1e-6 * width
            probes.append(f(x, x - lo, hi - x) if offsets else f(x))
        if order_hi >= 1.0:
            x = hi - 1e-6 * width
            probes.append(f(x, x - lo, hi - x) if offsets else f(x))
        s = math.copysign(1.0, probes[0])
        if len(probes) == 2 and math.copysign(1.0, probes[1]) != s:
            return math.nan, math.inf
        return s * math.inf, math.inf
    value, err, status = _tanh_sinh_callable(f, lo, hi, tol, offsets)
    if status != 0:
        raise ToleranceNotMet(f"tanh-sinh stalled at err={err:.3g}",
                              value=value, estimate=err)
    return value, err


# ---------------------------------------------------------------------------
# Travel intervals and reports


@dataclass(frozen=True)
class TravelInterval:
    """Oriented x-sweeps of a geodesic segment, with multiplicity."""

    sweeps: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "sweeps",
                           tuple((float(a), float(b)) for a, b in self.sweeps))
        scale = 1e-9 * (1.0 + max(abs(x) for s in self.sweeps for x in s))
        for (a0, b0), (a1, b1) in zip(self.sweeps[:-1], self.sweeps[1:]):
            if abs(b0 - a1) > scale:
                raise ValueError("consecutive sweeps must share endpoints")


@dataclass
class PeriodReport:
    L: float
    delta_y: float
    delta_z: float
    theta1: float
    theta2: float
    finite: dict[str, bool]
    errors: dict[str, float]
    pencil: PencilElement
    hill: HillInterval

    def as_dict(self) -> dict:
        return {
            "L": self.L, "delta_y": self.delta_y, "delta_z": self.delta_z,
            "theta1": self.theta1, "theta2": self.theta2,
            "finite": dict(self.finite), "errors": dict(self.errors),
            "pencil": {"a": self.pencil.a, "b": self.pencil.b},
            "hill": [self.hill.lo, self.hill.hi],
        }


@dataclass
class CostReport:
    delta_t: float
    delta_y: float
    delta_z: float
    cost_t: float
    cost_y: float
    finite: dict[str, bool]
    errors: dict[str, float]


def _period_parts(F: Polynomial, G: Polynomial):
    omG = 1.0 - G
    opG = 1.0 + G
    omF = 1.0 - F
    return {
        "L": [(omG, -0.5), (opG, -0.5)],
        "delta_y": [(G, 1.0), (omG, -0.5), (opG, -0.5)],
        "delta_z": [(G, 1.0), (F, 1.0), (omG, -0.5), (opG, -0.5)],
        "theta1": [(omG, 0.5), (opG, -0.5)],
        "theta2": [(omF, 1.0), (G, 1.0), (omG, -0.5), (opG, -0.5)],
    }


def period_report(F: Polynomial, pencil: PencilElement | tuple[float, float],
                  hill: HillInterval, tol: float = 1e-10) -> PeriodReport:
    """Period integrals L, Delta y, Delta z, Theta_1, Theta_2 over a hill.

    Each integral is 2 * int over the hill of its integrand; divergent
    entries (decided from endpoint vanishing orders) come back as signed
    infinities with finite=False.
    """
    if not isinstance(pencil, PencilElement):
        pencil = PencilElement(pencil[0], pencil[1], F)
    G = pencil.poly
    hill.validate(G)
    parts = _period_parts(F, G)
    vals = {}
    finite = {}
    errors = {}
    for name, p in parts.items():
        val, err, fin = _integrate_factored(p, hill.lo, hill.hi, tol)
        vals[name] = 2.0 * val
        finite[name] = fin
        errors[name] = 2.0 * err if fin else math.inf
    return PeriodReport(vals["L"], vals["delta_y"], vals["delta_z"],
                        vals["theta1"], vals["theta2"], finite, errors,
                        pencil, hill)


def cost_over_travel(F: Polynomial, pencil: PencilElement | tuple[float, float],
                     travel: TravelInterval, tol: float = 1e-10) -> CostReport:
    """Delta and Cost integrals summed over the oriented sweeps of `travel`.

    Every sweep must lie inside one hill interval of G = a + bF.  Sweeps are
    integrated with |dx| so orientation only matters through repetition.
    cost_t and cost_y use their own stable integrands (1-G resp. G(1-F) over
    the square root) rather than differences of the Delta entries.
    """
    if not isinstance(pencil, PencilElement):
        pencil = PencilElement(pencil[0], pencil[1], F)
    G = pencil.poly
    xs = [x for s in travel.sweeps for x in s]
    span = max(xs) - min(xs) + 1.0
    hills = hill_intervals(G, min(xs) - span, max(xs) + span)
    parts = _period_parts(F, G)
    parts["cost_t"] = [(1.0 - G, 0.5), (1.0 + G, -0.5)]
    parts["cost_y"] = [((1.0 - F) * G, 1.0), (1.0 - G, -0.5), (1.0 + G, -0.5)]
    totals = {k: 0.0 for k in parts}
    errors = {k: 0.0 for k in parts}
    finite = {k: True for k in parts}
    slack = 1e-9 * span
    for a, b in travel.sweeps:
        u, v = (a, b) if a <= b else (b, a)
        if not any(h.contains(u, slack) and h.contains(v, slack) for h in hills):
            raise NotHillInterval(
                f"sweep [{a}, {b}] is not inside a hill interval of G")
        if v - u <= 0.0:
            continue
        for name, p in parts.items():
            val, err, fin = _integrate_factored(p, u, v, tol)
            totals[name] += val
            errors[name] += err if fin else math.inf
            finite[name] = finite[name] and fin
    return CostReport(totals["L"], totals["delta_y"], totals["delta_z"],
                      totals["cost_t"], totals["cost_y"], finite, errors)


# ---------------------------------------------------------------------------
# Pencil scans


@dataclass
class ScanResult:
    rows: list[tuple[float, float, float]]
    monotonic: bool
    fitted_exponent: float | None = None
    expected_exponent: float | None = None
    window_used: tuple[float, float] | None = None
    window_alt: tuple[float, float] | None = None

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["s", "theta2", "err"])
            for s, th, err in self.rows:
                w.writerow([repr(s), repr(th), repr(err)])


def theta2_scan(F: Polynomial, family: str = "direct", grid=None,
                n: int = 1, tol: float = 1e-10) -> ScanResult:
    """Theta_2 along a one-parameter pencil slice.

    family="direct": G_s = s + (1-s) F over an s-grid inside the admissible
    window derived from classification (G_s must keep [0,1] as a direct-type
    hill); the window (1 - 2/q_max, 1) is used and the alternative
    (2/q_max, 1) is reported alongside.

    family="homoclinic": F is ignored; G_beta = 1 - 2 beta x^(2n) over a
    beta-grid, each on its hill [0, beta^(-1/(2n))].  Also fits the scaling
    exponent of log|Theta_2| against log beta (expected -(2n+1)/(2n)).
    """
    rows: list[tuple[float, float, float]] = []
    if family == "direct":
        from .polynomials import direct_type_factorize
        _k1, _k2, _q, q_max = direct_type_factorize(F)
        window = (1.0 - 2.0 / q_max, 1.0)
        window_alt = (2.0 / q_max, 1.0)
        if grid is None:
            lo = window[0] + 0.02 * (window[1] - window[0])
            grid = np.linspace(lo, 0.95, 25)
        for s in grid:
            pencil = PencilElement(float(s), 1.0 - float(s), F)
            G = pencil.poly
            hills = [h for h in hill_intervals(G, -0.25, 1.25)
                     if abs(h.lo) < 1e-6 and abs(h.hi - 1.0) < 1e-6]
            if not hills:
                raise NotHillInterval(f"[0,1] is not a hill of G_s at s={s}")
            rep = period_report(F, pencil, hills[0], tol)
            rows.append((float(s), rep.theta2, rep.errors["theta2"]))
        mono = all(b[1] > a[1] for a, b in zip(rows[:-1], rows[1:]))
        return ScanResult(rows, mono, window_used=window, window_alt=window_alt)

    if family == "homoclinic":
        base = Polynomial(np.concatenate([[1.0], np.zeros(2 * n - 1), [-2.0]]))
        if grid is None:
            grid = np.array([0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0])
        for beta in grid:
            beta = float(beta)
            pencil = PencilElement(1.0 - beta, beta, base)
            G = pencil.poly
            xr = beta ** (-1.0 / (2 * n))
            hills = [h for h in hill_intervals(G, -0.25, xr + 0.5)
                     if abs(h.lo) < 1e-9 and abs(h.hi - xr) < 1e-6 * (1.0 + xr)]
            if not hills:
                raise NotHillInterval(f"no hill [0, {xr}] at beta={beta}")
            rep = period_report(base, pencil, hills[0], tol)
            rows.append((beta, rep.theta2, rep.errors["theta2"]))
        mono = all(b[1] > a[1] for a, b in zip(rows[:-1], rows[1:]))
        lb = np.log([r[0] for r in rows])
        lt = np.log([abs(r[1]) for r in rows])
        slope = float(np.polyfit(lb, lt, 1)[0])
        expected = -(2.0 * n + 1.0) / (2.0 * n)
        return ScanResult(rows, mono, fitted_exponent=slope,
                          expected_exponent=expected)

    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Separatrix time maps for the monomial family F = 1 - 2 x^m on [0, 1]


def _sep_remainder(m: int, x: float, tol: float = 1e-12) -> float:
    """int_x^1 [ (1-x'^m)^(-1/2) - 1 ] / (2 x'^(m/2)) dx', stable at both ends."""
    if x >= 1.0:
        return 0.0
    s_coeffs = np.ones(m)

    def g(xp, dlo, dhi):
        if xp <= 0.0:
            return 0.0
        if xp < 0.5:
            # Away from the upper endpoint 1 - xp^m is best formed directly;
            # the factored form below carries O(eps) noise that the division
            # by xp^(m/2) would amplify without bound as xp -> 0.
            core = math.expm1(-0.5 * math.log1p(-(xp ** m)))
        else:
            # 1 - xp^m = dhi * (1 + xp + ... + xp^(m-1)) when dhi = 1 - xp.
            s = dhi * float(npoly.polyval(xp, s_coeffs))
            if s <= 0.0:
                return math.inf
            core = math.expm1(-0.5 * math.log(s))
        return core / (2.0 * xp ** (0.5 * m))

    value, _err, status = _tanh_sinh_callable(g, x, 1.0, tol, offsets=True)
    if status != 0:
        raise ToleranceNotMet("separatrix remainder quadrature stalled",
                              value=value, estimate=_err)
    return value


def separatrix_time(m: int, x: float, tol: float = 1e-12) -> float:
    """Time for the separatrix of G = 1 - 2x^m to travel from x up to 1.

    The divergent part int dx'/(2 x'^(m/2)) is integrated in closed form so
    the result stays accurate for x down to the underflow threshold.
    """
    if not 0.0 < x <= 1.0:
        raise ValueError("x must be in (0, 1]")
    if m == 2:
        head = -0.5 * math.log(x)
    else:
        head = (x ** (1.0 - 0.5 * m) - 1.0) / (m - 2.0)
    return head + _sep_remainder(m, x, tol)


def separatrix_position(m: int, t: float, tol: float = 1e-12) -> float:
    """Inverse of separatrix_time: the x reached t time units before 1."""
    if t <= 0.0:
        return 1.0
    r0 = _sep_remainder(m, 1e-30, tol)
    target = t
    if m == 2:
        lam = -2.0 * max(target - r0, 1e-12)
    else:
        base = (m - 2.0) * max(target - r0, 1e-12) + 1.0
        lam = (-2.0 / (m - 2.0)) * math.log(base)
    if lam < -700.0:
        raise ValueError("separatrix position underflows double precision "
                         f"at t = {t}")
    for _ in range(60):
        x = math.exp(lam)
        if x >= 1.0:
            x = 1.0 - 1e-12
            lam = math.log(x)
        phi = separatrix_time(m, x, tol) - target
        if abs(phi) <= 1e-12 * (1.0 + target):
            break
        dphi = -x ** (1.0 - 0.5 * m) / (2.0 * math.sqrt(max(1.0 - x ** m, 1e-300)))
        step = phi / dphi
        if step > 2.0:
            step = 2.0
        elif step < -2.0:
            step = -2.0
        lam -= step
    return math.exp(lam)
