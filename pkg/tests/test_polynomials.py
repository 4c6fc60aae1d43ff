"""Polynomial layer: arithmetic, roots, hill intervals, factorizations."""

import json
import math

import numpy as np
import pytest

from jetgeo import (AffineMap, DegenerateHill, EndpointKind, HillInterval,
                    NotDirectType, NotHillInterval, PencilElement, Polynomial,
                    direct_type_factorize, hill_intervals, markov_bound_check,
                    normalize_to_unitary, real_roots)

from conftest import DIRECT, SOLITON, TURNBACK


class TestPolynomial:
    def test_eval_and_trim(self):
        p = Polynomial([1.0, 2.0, 0.0, 0.0])
        assert p.degree == 1
        assert p(3.0) == 7.0

    def test_coeffs_are_frozen_copies(self):
        src = np.array([1.0, 2.0])
        p = Polynomial(src)
        src[0] = 5.0
        assert p(0.0) == 1.0
        with pytest.raises(ValueError):
            p.coeffs[0] = 9.0

    def test_deriv(self):
        p = Polynomial([1.0, 0.0, -2.0])
        assert np.allclose(p.deriv().coeffs, [0.0, -4.0])

    def test_compose_affine(self):
        p = Polynomial([0.0, 0.0, 1.0])  # x^2
        q = p.compose_affine(1.0, 2.0)   # (1 + 2x)^2
        xs = np.linspace(-2, 2, 7)
        assert np.allclose(q(xs), (1.0 + 2.0 * xs) ** 2)

    def test_sup_norm_interior_max(self):
        p = Polynomial([0.0, 0.0, 1.0, 0.0, -1.0])  # x^2 - x^4, max 1/4
        assert math.isclose(p.sup_norm(-1.0, 1.0), 0.25, rel_tol=1e-12)

    def test_is_even(self):
        assert SOLITON.is_even()
        assert not TURNBACK.is_even()

    def test_json_roundtrip(self):
        p = Polynomial([1.5, 0.0, -2.25])
        q = Polynomial.from_json(p.to_json())
        assert q == p
        assert json.loads(p.to_json()) == [1.5, 0.0, -2.25]

    def test_from_json_rejects_non_array(self):
        with pytest.raises(ValueError):
            Polynomial.from_json("{}")


class TestRealRoots:
    def test_simple_roots(self):
        p = Polynomial([-2.0, 0.0, 1.0])  # x^2 - 2
        roots = real_roots(p, -3.0, 3.0)
        got = sorted(r for r, _m in roots)
        assert np.allclose(got, [-math.sqrt(2.0), math.sqrt(2.0)], atol=1e-12)

    def test_multiple_root(self):
        # (x - 1)^2 (x + 2)
        p = Polynomial(np.polynomial.polynomial.polyfromroots([1.0, 1.0, -2.0]))
        roots = real_roots(p, -3.0, 3.0)
        ms = sorted((round(r, 6), m) for r, m in roots)
        assert ms == [(-2.0, 1), (1.0, 2)]

    def test_window_filter(self):
        p = Polynomial([-2.0, 0.0, 1.0])
        roots = real_roots(p, 0.0, 3.0)
        assert len(roots) == 1 and roots[0][0] == pytest.approx(math.sqrt(2.0))


class TestHillIntervals:
    def test_soliton_hills(self):
        hills = hill_intervals(SOLITON, -2.0, 2.0)
        assert [(h.lo, h.hi) for h in hills] == [(-1.0, 0.0), (0.0, 1.0)]
        h = hills[1]
        assert h.kind_lo is EndpointKind.CRITICAL
        assert h.kind_hi is EndpointKind.REGULAR
        assert h.value_lo == pytest.approx(1.0)
        assert h.value_hi == pytest.approx(-1.0)

    def test_linear_hill(self):
        hills = hill_intervals(Polynomial([0.0, 1.0]), -5.0, 5.0)
        assert len(hills) == 1
        assert (hills[0].lo, hills[0].hi) == (-1.0, 1.0)

    def test_direct_type_hill(self):
        hills = hill_intervals(DIRECT, -0.5, 1.5)
        inner = [h for h in hills if h.lo == pytest.approx(0.0)
                 and h.hi == pytest.approx(1.0)]
        assert len(inner) == 1
        h = inner[0]
        assert h.kind_lo is EndpointKind.CRITICAL
        assert h.kind_hi is EndpointKind.CRITICAL

    def test_constant_degenerate(self):
        with pytest.raises(DegenerateHill):
            hill_intervals(Polynomial([1.0]), -1.0, 1.0)

    def test_constant_interior(self):
        # |F| < 1 everywhere: the whole window librates freely (Line class).
        hills = hill_intervals(Polynomial([0.5]), -1.0, 1.0)
        assert len(hills) == 1
        assert (hills[0].lo, hills[0].hi) == (-1.0, 1.0)

    def test_validate_rejects_non_hill(self):
        h = HillInterval(0.2, 0.8, EndpointKind.REGULAR, EndpointKind.REGULAR,
                         1.0, -1.0)
        with pytest.raises(NotHillInterval):
            h.validate(SOLITON)

    def test_contains(self):
        h = hill_intervals(SOLITON, -2.0, 2.0)[1]
        assert h.contains(0.5)
        assert not h.contains(1.5)


class TestNormalize:
    def test_affine_map_roundtrip(self):
        phi = AffineMap(1.5, 2.0)
        assert phi(0.25) == 2.0
        assert phi.inverse(phi(0.3)) == pytest.approx(0.3)

    def test_normalize_to_unitary(self):
        F = DIRECT.compose_affine(-0.75, 0.5)  # hill [1.5, 3.5]
        hills = hill_intervals(F, 0.0, 5.0)
        h = [hh for hh in hills if abs(hh.lo - 1.5) < 1e-9][0]
        Fhat, phi = normalize_to_unitary(F, h)
        assert phi(0.0) == pytest.approx(1.5)
        assert phi(1.0) == pytest.approx(3.5)
        uhills = hill_intervals(Fhat, -0.5, 1.5)
        assert any(abs(u.lo) < 1e-9 and abs(u.hi - 1.0) < 1e-9 for u in uhills)


class TestDirectTypeFactorize:
    def test_direct_example(self):
        k1, k2, q, q_max = direct_type_factorize(DIRECT)
        assert (k1, k2) == (2, 2)
        # 1 - F = 24 x^2 (1-x)^2, so q = 24 and the max of 1 - F is 24/16.
        assert q(0.5) == pytest.approx(24.0)
        assert q_max == pytest.approx(1.5)

    def test_rejects_non_direct(self):
        with pytest.raises(NotDirectType):
            direct_type_factorize(SOLITON)


class TestMarkovBound:
    def test_chebyshev_like(self):
        # Degree-2 polynomial on [0,1] with sup 1: derivative sup <= 8.
        T2 = Polynomial([1.0, -8.0, 8.0])
        sup, dsup, ok = markov_bound_check(T2)
        assert sup == pytest.approx(1.0)
        assert dsup == pytest.approx(8.0)
        assert ok

    def test_generic(self):
        sup, dsup, ok = markov_bound_check(DIRECT)
        assert ok and dsup <= 2.0 * DIRECT.degree ** 2 * sup * (1 + 1e-9)


class TestPencil:
    def test_poly(self):
        pen = PencilElement(0.5, 2.0, SOLITON)
        xs = np.linspace(-1, 1, 5)
        assert np.allclose(pen.poly(xs), 0.5 + 2.0 * SOLITON(xs))
