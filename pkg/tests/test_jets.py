"""Jet-space group structure and geodesics."""

import math

import numpy as np
import pytest

from jetgeo import (JetPoint, Polynomial, carnot_dilate, group_inverse,
                    group_mul, hill_intervals, identity, integrate_jet,
                    normalize_to_unitary, project_plane, reflect_theta0)

from conftest import DIRECT, SOLITON


def _random_point(rng, k):
    return JetPoint(float(rng.uniform(-2, 2)),
                    tuple(float(v) for v in rng.uniform(-2, 2, k + 1)))


class TestGroupLaw:
    def test_identity(self, rng):
        g = _random_point(rng, 3)
        e = identity(3)
        for h in (group_mul(e, g), group_mul(g, e)):
            assert h.x == pytest.approx(g.x)
            assert np.allclose(h.thetas, g.thetas)

    def test_inverse(self, rng):
        for _ in range(5):
            g = _random_point(rng, 4)
            gi = group_inverse(g)
            e = group_mul(g, gi)
            assert e.x == pytest.approx(0.0, abs=1e-12)
            assert np.allclose(e.thetas, 0.0, atol=1e-12)
            e2 = group_mul(gi, g)
            assert np.allclose(e2.thetas, 0.0, atol=1e-12)

    def test_associativity(self, rng):
        for _ in range(5):
            g, h, k = (_random_point(rng, 3) for _ in range(3))
            left = group_mul(group_mul(g, h), k)
            right = group_mul(g, group_mul(h, k))
            assert left.x == pytest.approx(right.x)
            assert np.allclose(left.thetas, right.thetas, rtol=1e-12,
                               atol=1e-12)

    def test_noncommutative(self):
        g = JetPoint(1.0, (0.0, 0.0))
        h = JetPoint(0.0, (1.0, 0.0))
        gh = group_mul(g, h)
        hg = group_mul(h, g)
        assert not np.allclose(gh.thetas, hg.thetas)

    def test_dilation_is_automorphism(self, rng):
        g, h = _random_point(rng, 3), _random_point(rng, 3)
        u = 1.7
        lhs = carnot_dilate(group_mul(g, h), u)
        rhs = group_mul(carnot_dilate(g, u), carnot_dilate(h, u))
        assert lhs.x == pytest.approx(rhs.x)
        assert np.allclose(lhs.thetas, rhs.thetas)

    def test_dilation_weights(self):
        g = JetPoint(1.0, (1.0, 1.0, 1.0))
        d = carnot_dilate(g, 2.0)
        assert d.x == 2.0
        assert d.thetas == (2.0, 4.0, 8.0)

    def test_dilation_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            carnot_dilate(identity(1), -1.0)

    def test_reflect_and_project(self):
        g = JetPoint(0.5, (1.0, 2.0))
        assert reflect_theta0(g).thetas == (-1.0, 2.0)
        assert project_plane(g) == (0.5, 1.0)


class TestIntegrateJet:
    def test_horizontality_and_energy(self):
        start = JetPoint(0.9, (0.0, 0.0, 0.0))
        traj = integrate_jet(SOLITON, None, start, 1, (-4.0, 4.0), 1e-10)
        assert traj.energy_residual <= 1e-9
        assert traj.horizontality_residual() <= 1e-7

    def test_k_must_cover_degree(self):
        with pytest.raises(ValueError):
            integrate_jet(SOLITON, None, JetPoint(0.5, (0.0,)), 1, (0.0, 1.0))

    def test_theta0_is_y_rate(self):
        # theta_0' = F(x): for F = x on the linear hill the plane projection
        # is the classical pendulum-like wave.
        F = Polynomial([0.0, 1.0])
        traj = integrate_jet(F, None, JetPoint(0.0, (0.0, 0.0)), 1,
                             (0.0, 2.0 * math.pi), 1e-10)
        assert traj.xs[-1] == pytest.approx(0.0, abs=1e-8)
        proj = traj.plane_projection()
        assert proj.shape == (len(traj.times), 2)

    def test_anchor_at_zero(self):
        start = JetPoint(0.5, (0.3, 0.1, 0.0))
        traj = integrate_jet(SOLITON, None, start, 1, (-1.0, 1.0), 1e-10)
        i = int(np.argmin(np.abs(traj.times)))
        assert traj.xs[i] == pytest.approx(0.5)
        assert np.allclose(traj.thetas[i], start.thetas)

    def test_csv(self, tmp_path):
        traj = integrate_jet(SOLITON, None, JetPoint(0.5, (0.0, 0.0, 0.0)), 1,
                             (0.0, 0.5), 1e-10)
        path = tmp_path / "jet.csv"
        traj.write_csv(path)
        header = path.read_text().splitlines()[0]
        assert header == "t,x,theta0,theta1,theta2"


class TestNormalizationReconstruction:
    def test_dilation_translation_recovers_geodesic(self):
        x0, u = 1.5, 2.0
        F = DIRECT.compose_affine(-x0 / u, 1.0 / u)  # hill [1.5, 3.5]
        hills = hill_intervals(F, 0.0, 5.0)
        h = [hh for hh in hills if abs(hh.lo - x0) < 1e-9][0]
        Fhat, phi = normalize_to_unitary(F, h)
        k = 4
        zero = (0.0,) * (k + 1)
        ghat = integrate_jet(Fhat, None, JetPoint(0.5, zero), 1,
                             (0.0, 1.5), 1e-11)
        g = integrate_jet(F, None, JetPoint(phi(0.5), zero), 1,
                          (0.0, 3.0), 1e-11, dt=0.005 * u)
        trans = JetPoint(x0, zero)
        # g's grid spacing is u times ghat's, so sample j matches sample j.
        assert len(ghat.times) == len(g.times)
        worst = 0.0
        for j in range(0, len(g.times), 50):
            rec = group_mul(trans, carnot_dilate(ghat.point(j), u))
            direct = g.point(j)
            worst = max(worst, abs(rec.x - direct.x),
                        max(abs(a - b)
                            for a, b in zip(rec.thetas, direct.thetas)))
        assert worst <= 1e-6
