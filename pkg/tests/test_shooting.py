"""Two-point shooting search and sign-time reports."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from jetgeo import (ConnectConfig, MagneticPoint, NotApplicable, Polynomial,
                    connect, integrate_magnetic, sign_time)

from conftest import DIRECT, SOLITON

CHEAP = ConnectConfig(grid_n=13, n_refine=3, coarse_samples=400,
                      fine_samples=1500, seed=0)


class TestConnect:
    def test_recovers_soliton_segment(self):
        md = integrate_magnetic(SOLITON, (0.0, 1.0),
                                MagneticPoint(1.0, 0.0, 0.0), 1,
                                (-1.0, 1.0), 1e-11)
        lo, hi = md.interpolate(-1.0), md.interpolate(1.0)
        cfg = ConnectConfig(grid_n=13, n_refine=3, coarse_samples=400,
                            fine_samples=1500, seed=0, t_max=3.0)
        out = connect(SOLITON, MagneticPoint(*lo[:3]), MagneticPoint(*hi[:3]),
                      cfg)
        assert out.accepted
        assert out.best.kind == "normal"
        assert out.best.T == pytest.approx(2.0, abs=1e-6)
        assert out.best.residual <= 1e-6
        assert out.best.a == pytest.approx(0.0, abs=1e-5)
        assert out.best.b == pytest.approx(1.0, abs=1e-5)

    def test_abnormal_candidate(self):
        F = Polynomial([0.0, 0.0, 1.0])  # critical at x = 0, F(0) = 0
        out = connect(F, MagneticPoint(0.0, 0.0, 0.0),
                      MagneticPoint(0.0, 2.0, 0.0), CHEAP)
        kinds = [r.kind for r in ([out.best] + out.alternatives
                                  if out.accepted else out.best_effort)]
        assert "abnormal" in kinds
        ab = [r for r in ([out.best] + out.alternatives if out.accepted
                          else out.best_effort) if r.kind == "abnormal"][0]
        assert ab.T == pytest.approx(2.0)
        assert ab.residual <= 1e-9

    def test_identical_endpoints_rejected(self):
        with pytest.raises(ValueError):
            connect(SOLITON, MagneticPoint(0.5, 0.0, 0.0),
                    MagneticPoint(0.5, 0.0, 0.0), CHEAP)

    def test_no_match_returns_best_effort(self):
        # An unreachable target (wildly off-surface) yields accepted=False
        # with a non-empty ranked best-effort list, not an exception.
        cfg = ConnectConfig(grid_n=5, n_refine=2, coarse_samples=200,
                            fine_samples=500, t_max=1.0, seed=0)
        out = connect(SOLITON, MagneticPoint(0.5, 0.0, 0.0),
                      MagneticPoint(0.5, 50.0, -50.0), cfg)
        assert not out.accepted
        assert out.best is None
        assert len(out.best_effort) > 0

    def test_seeded_jitter_reproducible(self):
        md = integrate_magnetic(SOLITON, (0.0, 1.0),
                                MagneticPoint(1.0, 0.0, 0.0), 1,
                                (-1.0, 1.0), 1e-11)
        lo, hi = md.interpolate(-1.0), md.interpolate(1.0)
        cfg = ConnectConfig(grid_n=7, n_refine=2, coarse_samples=300,
                            fine_samples=800, t_max=3.0, seed=42, jitter=0.25)
        out1 = connect(SOLITON, MagneticPoint(*lo[:3]),
                       MagneticPoint(*hi[:3]), cfg)
        out2 = connect(SOLITON, MagneticPoint(*lo[:3]),
                       MagneticPoint(*hi[:3]), cfg)
        assert out1.accepted == out2.accepted
        if out1.accepted:
            assert out1.best.a == out2.best.a
            assert out1.best.b == out2.best.b
            assert out1.best.T == out2.best.T


class TestSignTime:
    def test_soliton_matches_root_oracle(self):
        # y(t) = t - tanh(2t) along the soliton: the last sign violation is
        # the positive root of t = tanh(2t).
        rep = sign_time(SOLITON, (0.0, 1.0), MagneticPoint(1.0, 0.0, 0.0))
        oracle = brentq(lambda t: t - math.tanh(2.0 * t), 0.5, 2.0)
        assert rep.T_star == pytest.approx(oracle, abs=1e-4)
        assert rep.y_min_after > 0.0
        assert rep.y_max_before < 0.0
        assert rep.t_costy_negative is not None

    def test_direct_type_finite(self):
        rep = sign_time(DIRECT, (0.0, 1.0), MagneticPoint(0.5, 0.0, 0.0))
        assert math.isfinite(rep.T_star)
        assert rep.T_star >= 0.0
        assert rep.y_min_after > 0.0

    def test_x_periodic_not_applicable(self):
        F = Polynomial([0.0, 1.0])
        with pytest.raises(NotApplicable):
            sign_time(F, (0.0, 1.0), MagneticPoint(0.0, 0.0, 0.0))
