"""The odd-exponent shortcut construction."""

import math

import pytest

from jetgeo import NotOdd, counterexample_report, family_poly


class TestFamilyPoly:
    def test_exponent(self):
        F = family_poly(2)
        assert F.degree == 5
        assert F(0.0) == 1.0
        assert F(1.0) == -1.0

    def test_rejects_bad_m(self):
        with pytest.raises(NotOdd):
            family_poly(0)
        with pytest.raises(NotOdd):
            family_poly(1.5)


class TestReports:
    def test_small_grid_consistency(self):
        reports = counterexample_report([1.0, 4.0, 16.0], m=1)
        assert [r.n for r in reports] == [1.0, 4.0, 16.0]
        for r in reports:
            # ODE cross-check closes the arrival point for these small n.
            assert r.reach_residual <= 1e-8
            assert r.horizontality_residual <= 1e-8
            assert r.eps_n > 0.0
            assert r.delta_z == pytest.approx(r.delta_y * (1.0 + r.eps_n),
                                              rel=1e-12)
            assert r.T3 == pytest.approx(
                r.delta_y + 2.0 * (r.delta_n + r.x_n), rel=1e-12)
            assert r.delta_y + r.cost_t == pytest.approx(2.0 * r.n, rel=1e-12)

    def test_verdict_flips(self):
        reports = counterexample_report([1.0, 4.0], m=1)
        assert reports[0].verdict is False   # 2n still shorter at n = 1
        assert reports[1].verdict is True    # the broken path wins by n = 4

    def test_z_outruns_y(self):
        (r,) = counterexample_report([8.0], m=1)
        assert r.delta_z > r.delta_y

    def test_quadrature_only_large_n(self):
        (r,) = counterexample_report([2.0 ** 30], m=1)
        assert r.verdict is True
        assert r.reach_residual <= 1e-10
        assert 0.0 < r.x_n < 1e-17

    def test_higher_m(self):
        (r,) = counterexample_report([64.0], m=2)
        assert r.verdict is True

    def test_as_dict_keys(self):
        (r,) = counterexample_report([4.0], m=1)
        d = r.as_dict()
        for key in ("n", "x_n", "eps_n", "delta_n", "T1", "T2", "T3",
                    "two_n", "verdict", "delta_y", "delta_z", "cost_t",
                    "horizontality_residual", "reach_residual"):
            assert key in d
