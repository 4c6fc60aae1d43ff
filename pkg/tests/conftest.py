"""Shared fixtures and samplers for the test suite."""

import numpy as np
import pytest

from jetgeo import (EndpointKind, JetGeoError, PencilElement, Polynomial,
                    hill_intervals, period_report)

SOLITON = Polynomial([1.0, 0.0, -2.0])
CUBIC = Polynomial([1.0, 0.0, 0.0, -2.0])
TURNBACK = Polynomial([1.0, 0.0, -6.0, 4.0])
DIRECT = Polynomial([1.0, 0.0, -24.0, 48.0, -24.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def sample_xperiodic(rng, max_tries=200):
    """A random (F, (a, b), hill) whose libration is XPeriodic with a
    moderate period, for ODE/quadrature cross-validation."""
    for _ in range(max_tries):
        deg = int(rng.integers(2, 5))
        F = Polynomial(rng.uniform(-1.0, 1.0, deg + 1))
        a = float(rng.uniform(-0.8, 0.8))
        b = float(rng.uniform(0.3, 1.5))
        G = PencilElement(a, b, F).poly
        try:
            hills = hill_intervals(G, -3.0, 3.0)
        except JetGeoError:
            continue
        for h in hills:
            if (h.kind_lo is EndpointKind.REGULAR
                    and h.kind_hi is EndpointKind.REGULAR
                    and 0.1 < h.width < 3.0):
                try:
                    rep = period_report(F, (a, b), h, 1e-11)
                except JetGeoError:
                    continue
                if rep.finite["L"] and rep.L < 60.0:
                    return F, (a, b), h, rep
    raise RuntimeError("sampler failed to produce an XPeriodic instance")
