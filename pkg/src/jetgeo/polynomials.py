"""Real polynomials, root finding, and hill-interval machinery.

Coefficients are stored in ascending order, matching the JSON interchange
format used by the CLI: ``[c0, c1, ...]`` means ``c0 + c1 x + ...``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateHill, NonConvergence, NotDirectType

__all__ = [
    "Polynomial",
    "PencilElement",
    "AffineMap",
    "EndpointKind",
    "HillInterval",
    "real_roots",
    "hill_intervals",
    "normalize_to_unitary",
    "direct_type_factorize",
    "markov_bound_check",
]


def _trim(c) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=float))
    n = c.shape[0]
    while n > 1 and c[n - 1] == 0.0:
        n -= 1
    return np.array(c[:n], dtype=float)


@dataclass(frozen=True)
class Polynomial:
    """Dense real polynomial with ascending coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))
        self.coeffs.setflags(write=False)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __call__(self, x):
        return npoly.polyval(x, self.coeffs)

    def deriv(self, order: int = 1) -> "Polynomial":
        return Polynomial(npoly.polyder(self.coeffs, order))

    def __add__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polyadd(self.coeffs, other.coeffs))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polysub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polysub(other.coeffs, self.coeffs))

    def __mul__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polymul(self.coeffs, other.coeffs))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.coeffs.shape == other.coeffs.shape
                and bool(np.all(self.coeffs == other.coeffs)))

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def compose_affine(self, x0: float, u: float) -> "Polynomial":
        """Return the polynomial ``x -> self(x0 + u * x)``."""
        out = np.zeros(1)
        lin = np.array([x0, u])
        for c in self.coeffs[::-1]:
            out = npoly.polyadd(npoly.polymul(out, lin), [c])
        return Polynomial(out)

    def sup_norm(self, lo: float, hi: float) -> float:
        """max |self| on [lo, hi], located through the critical points."""
        xs = [lo, hi]
        if self.degree >= 2:
            for r, _m in real_roots(self.deriv(), lo, hi):
                xs.append(r)
        return float(np.max(np.abs(self(np.asarray(xs)))))

    def is_even(self, tol: float = 1e-12) -> bool:
        scale = float(np.max(np.abs(self.coeffs))) + 1.0
        return bool(np.all(np.abs(self.coeffs[1::2]) <= tol * scale))

    def to_json(self) -> str:
        return json.dumps([float(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        data = json.loads(text)
        if not isinstance(data, list) or not data:
            raise ValueError("polynomial JSON must be a non-empty array")
        return cls(np.asarray(data, dtype=float))


def _as_poly(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if np.isscalar(p):
        return Polynomial(np.array([float(p)]))
    return Polynomial(np.asarray(p, dtype=float))


@dataclass(frozen=True)
class PencilElement:
    """Element a + b*F of the pencil spanned by 1 and the base polynomial F."""

    a: float
    b: float
    base: Polynomial

    @property
    def poly(self) -> Polynomial:
        return self.base * self.b + self.a

    def to_json(self) -> str:
        return json.dumps({"a": self.a, "b": self.b,
                           "base": [float(c) for c in self.base.coeffs]})


@dataclass(frozen=True)
class AffineMap:
    """Map ``x -> x0 + u * x`` together with its inverse."""

    x0: float
    u: float

    def __call__(self, x):
        return self.x0 + self.u * x

    def inverse(self, x):
        return (x - self.x0) / self.u


class EndpointKind(enum.Enum):
    REGULAR = "regular"
    CRITICAL = "critical"


@dataclass(frozen=True)
class HillInterval:
    """Maximal interval where |F| <= 1 with |F| = 1 exactly at the ends."""

    lo: float
    hi: float
    kind_lo: EndpointKind
    kind_hi: EndpointKind
    value_lo: float = field(default=0.0)
    value_hi: float = field(default=0.0)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def validate(self, F: Polynomial, n_samples: int = 257) -> None:
        """Check the defining properties; raises NotHillInterval on failure."""
        from .errors import NotHillInterval

        scale = 1e-9 * (1.0 + F.sup_norm(self.lo, self.hi))
        if F.degree == 0:
            # Constant sub-unit F librates freely: the window itself stands
            # in for a hill and carries the Line class.
            if abs(float(F(self.lo))) > 1.0 + scale:
                raise NotHillInterval("|F| > 1 for the constant case")
            return
        if abs(abs(F(self.lo)) - 1.0) > scale or abs(abs(F(self.hi)) - 1.0) > scale:
            raise NotHillInterval(
                f"|F| != 1 at endpoints of [{self.lo}, {self.hi}]")
        xs = np.linspace(self.lo, self.hi, n_samples)
        if np.any(np.abs(F(xs)) > 1.0 + scale):
            raise NotHillInterval(f"|F| > 1 inside [{self.lo}, {self.hi}]")


# ---------------------------------------------------------------------------
# Root finding


def _poly_gcd(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    a = _trim(a)
    b = _trim(b)
    if b.shape[0] > a.shape[0]:
        a, b = b, a
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1.0)
    while b.shape[0] > 1 or abs(b[0]) > tol * scale:
        _q, r = npoly.polydiv(a, b)
        r = _trim(r)
        if np.max(np.abs(r)) <= tol * max(np.max(np.abs(b)), 1.0):
            r = np.array([0.0])
        a, b = b, r
        if b.shape[0] == 1 and b[0] == 0.0:
            break
    a = _trim(a)
    return a / a[-1]


def _yun_squarefree(c: np.ndarray) -> list[tuple[np.ndarray, int]]:
    """Square-free decomposition; returns [(factor, multiplicity), ...]."""
    c = _trim(c)
    if c.shape[0] <= 1:
        return []
    dc = npoly.polyder(c)
    g = _poly_gcd(c, dc)
    if g.shape[0] == 1:
        return [(c, 1)]
    out = []
    b = _trim(npoly.polydiv(c, g)[0])
    d = _trim(npoly.polysub(npoly.polydiv(dc, g)[0], npoly.polyder(b)))
    i = 1
    while b.shape[0] > 1:
        a = _poly_gcd(b, d) if (d.shape[0] > 1 or abs(d[0]) > 0) else b / b[-1]
        if a.shape[0] > 1:
            out.append((a, i))
        b = _trim(npoly.polydiv(b, a)[0])
        d = _trim(npoly.polysub(npoly.polydiv(d, a)[0], npoly.polyder(b)))
        i += 1
        if i > c.shape[0]:
            break
    return out


def _cluster_roots(c: np.ndarray, lo: float, hi: float):
    """Fallback decomposition: cluster the eigenvalue roots by proximity."""
    rr = np.sort_complex(np.roots(c[::-1]))
    width = max(hi - lo, 1.0)
    used = np.zeros(len(rr), dtype=bool)
    out = []
    for i in range(len(rr)):
        if used[i]:
            continue
        cluster = [rr[i]]
        used[i] = True
        for j in range(i + 1, len(rr)):
            if not used[j] and abs(rr[j] - rr[i]) < 1e-5 * width:
                cluster.append(rr[j])
                used[j] = True
        center = np.mean(cluster)
        if abs(center.imag) <= 1e-7 * (1.0 + abs(center.real)):
            out.append((float(center.real), len(cluster)))
    return out


def _polish_root(c: np.ndarray, dc: np.ndarray, r: float, scale: float) -> float:
    for _ in range(60):
        f = npoly.polyval(r, c)
        if abs(f) <= 1e-14 * scale:
            break
        df = npoly.polyval(r, dc)
        if df == 0.0:
            break
        step = f / df
        r = r - step
        if abs(step) <= 1e-16 * (1.0 + abs(r)):
            break
    return float(r)


def real_roots(F: Polynomial | np.ndarray, lo: float, hi: float,
               tol: float = 1e-12) -> list[tuple[float, int]]:
    """Real roots of F in [lo, hi] with multiplicities, sorted ascending.

    Uses a numeric square-free (Yun) decomposition so that each root is
    polished on a factor where it is simple; falls back to eigenvalue
    clustering when the float decomposition degrades.
    """
    c = F.coeffs if isinstance(F, Polynomial) else _trim(F)
    if c.shape[0] <= 1:
        return []
    width = max(hi - lo, 1e-12)
    pad = 1e-9 * max(width, 1.0)

    factors = _yun_squarefree(c)
    recon = np.array([1.0])
    for fac, mult in factors:
        for _ in range(mult):
            recon = npoly.polymul(recon, fac)
    ok = False
    if recon.shape[0] == c.shape[0]:
        ratio = c[-1] / recon[-1]
        ok = np.max(np.abs(recon * ratio - c)) <= 1e-6 * max(np.max(np.abs(c)), 1.0)
    candidates: list[tuple[float, int, np.ndarray]] = []
    if ok:
        for fac, mult in factors:
            if fac.shape[0] <= 1:
                continue
            for r in np.roots(fac[::-1]):
                if abs(r.imag) <= 1e-7 * (1.0 + abs(r.real)):
                    candidates.append((float(r.real), mult, fac))
    else:
        for r, mult in _cluster_roots(c, lo, hi):
            candidates.append((r, mult, c))

    scale = max(float(np.max(np.abs(c))), 1.0) * max(1.0, abs(lo), abs(hi)) ** (c.shape[0] - 1)
    out: list[tuple[float, int]] = []
    for r, mult, fac in candidates:
        if not (lo - pad <= r <= hi + pad):
            continue
        dfac = npoly.polyder(fac)
        r = _polish_root(fac, dfac, r, max(float(np.max(np.abs(fac))), 1.0)
                         * max(1.0, abs(r)) ** (fac.shape[0] - 1))
        if not (lo - pad <= r <= hi + pad):
            continue
        if abs(npoly.polyval(r, c)) > 1e-7 * scale:
            raise NonConvergence(
                f"root polish stalled near x={r:.6g}", bracket=(r - pad, r + pad))
        out.append((min(max(r, lo), hi), mult))
    out.sort()
    merged: list[tuple[float, int]] = []
    for r, m in out:
        if merged and abs(r - merged[-1][0]) <= 1e-10 * width:
            merged[-1] = (merged[-1][0], max(merged[-1][1], m))
        else:
            merged.append((r, m))
    return merged


# ---------------------------------------------------------------------------
# Hill intervals


def hill_intervals(F: Polynomial, lo: float, hi: float) -> list[HillInterval]:
    """All hill intervals of F whose closure lies inside [lo, hi].

    A hill interval is a maximal interval on which |F| <= 1, attaining
    |F| = 1 exactly at both ends.  Endpoints where F' vanishes (relative
    threshold 1e-9) are marked Critical.  A constant F with |F| = 1 is
    degenerate and rejected.
    """
    if hi <= lo:
        raise ValueError("window must satisfy lo < hi")
    if F.degree == 0:
        c = float(F.coeffs[0])
        if abs(abs(c) - 1.0) <= 1e-12:
            raise DegenerateHill("constant polynomial with |F| = 1")
        if abs(c) < 1.0:
            return [HillInterval(lo, hi, EndpointKind.CRITICAL,
                                 EndpointKind.CRITICAL, c, c)]
        return []

    contacts = []
    for r, _m in real_roots(F - 1.0, lo, hi):
        contacts.append(r)
    for r, _m in real_roots(F + 1.0, lo, hi):
        contacts.append(r)
    contacts = sorted(set(contacts))
    if len(contacts) < 2:
        return []

    dF = F.deriv()
    dsup = dF.sup_norm(lo, hi)
    crit_tol = 1e-9 * (1.0 + dsup)

    out = []
    for a, b in zip(contacts[:-1], contacts[1:]):
        if b - a <= 1e-12 * max(1.0, hi - lo):
            continue
        xs = np.linspace(a, b, 65)[1:-1]
        vals = F(xs)
        if np.max(np.abs(vals)) > 1.0 + 1e-9 * (1.0 + F.sup_norm(a, b)):
            continue
        kind_a = (EndpointKind.CRITICAL if abs(dF(a)) <= crit_tol
                  else EndpointKind.REGULAR)
        kind_b = (EndpointKind.CRITICAL if abs(dF(b)) <= crit_tol
                  else EndpointKind.REGULAR)
        out.append(HillInterval(a, b, kind_a, kind_b,
                                float(np.round(F(a))), float(np.round(F(b)))))
    return out


def normalize_to_unitary(F: Polynomial, hill: HillInterval
                         ) -> tuple[Polynomial, AffineMap]:
    """Affinely rescale a hill interval to [0, 1].

    Returns (Fhat, phi) with Fhat = F o phi and phi(t) = lo + width * t, so
    Fhat has [0, 1] as a hill interval.
    """
    phi = AffineMap(hill.lo, hill.width)
    return F.compose_affine(hill.lo, hill.width), phi


def direct_type_factorize(F: Polynomial) -> tuple[int, int, Polynomial, float]:
    """Write 1 - F = x^k1 (1-x)^k2 q(x) for a direct-type F on [0, 1].

    Requires F(0) = F(1) = 1 with vanishing derivative at both ends (so
    k1, k2 >= 2) and q > 0 on [0, 1].  Returns (k1, k2, q, q_max) where
    q_max is the maximum of x^k1 (1-x)^k2 q(x) over [0, 1].
    """
    P = (1.0 - F)
    c = P.coeffs.copy()
    scale = max(float(np.max(np.abs(c))), 1.0)
    if abs(P(0.0)) > 1e-9 * scale or abs(P(1.0)) > 1e-9 * scale:
        raise NotDirectType("F must equal 1 at both 0 and 1")

    k1 = 0
    while c.shape[0] > 1 and abs(c[0]) <= 1e-9 * scale:
        c = c[1:]
        k1 += 1
    # Deflate the root at 1: synthetic division by (x - 1).
    k2 = 0
    while c.shape[0] > 1 and abs(npoly.polyval(1.0, c)) <= 1e-9 * scale:
        q, r = npoly.polydiv(c, np.array([-1.0, 1.0]))
        c = _trim(q)
        k2 += 1
    if k1 < 2 or k2 < 2:
        raise NotDirectType(f"vanishing orders k1={k1}, k2={k2} must be >= 2")
    # 1 - F = x^k1 (x-1)^k2 c = x^k1 (1-x)^k2 * (-1)^k2 c.
    qpoly = Polynomial(c if k2 % 2 == 0 else -c)
    xs = np.linspace(0.0, 1.0, 257)
    if np.min(qpoly(xs)) <= 0.0:
        raise NotDirectType("q must be positive on [0, 1]")
    q_max = P.sup_norm(0.0, 1.0)
    return k1, k2, qpoly, q_max


def markov_bound_check(F: Polynomial) -> tuple[float, float, bool]:
    """Markov inequality data on [0, 1]: (sup|F|, sup|F'|, bound holds).

    For degree k the derivative bound is 2 k^2 sup|F|; equality cases make
    the check use a tiny relative slack.
    """
    k = F.degree
    sup = F.sup_norm(0.0, 1.0)
    if k == 0:
        return sup, 0.0, True
    dsup = F.deriv().sup_norm(0.0, 1.0)
    bound = 2.0 * k * k * sup
    return sup, dsup, dsup <= bound * (1.0 + 1e-12) + 1e-300
