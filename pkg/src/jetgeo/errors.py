"""Exception types shared across the package."""

from __future__ import annotations


class JetGeoError(Exception):
    """Base class for all package-specific errors."""


class NonConvergence(JetGeoError):
    """A root polish failed to meet its residual target.

    Carries the best bracket found so it can be reported to the caller.
    """

    def __init__(self, message: str, bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.bracket = bracket


class DegenerateHill(JetGeoError):
    """The candidate interval collapses to a point or a tangency."""


class NotHillInterval(JetGeoError):
    """The supplied interval is not a hill interval of the polynomial."""


class NotDirectType(JetGeoError):
    """The polynomial does not satisfy the direct-type factorization shape."""


class NotPeriodic(JetGeoError):
    """The trajectory class has no finite period."""


class SeparatrixStall(JetGeoError):
    """Integration stalled near a critical equilibrium before the span ended."""

    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class StartMismatch(JetGeoError):
    """A lift was requested from a jet point that does not project to the start."""


class NotCriticalPoint(JetGeoError):
    """The supplied abscissa is not a critical point of the polynomial."""


class NotSymmetric(JetGeoError):
    """Reflection symmetry was required but the data is not even."""


class ToleranceNotMet(JetGeoError):
    """Quadrature did not converge; carries the best value and error estimate."""

    def __init__(self, message: str, value: float, estimate: float):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class NoCandidate(JetGeoError):
    """No shooting candidate met the matching tolerance.

    Carries the best-effort ranking so callers can still inspect it.
    """

    def __init__(self, message: str, ranking=None):
        super().__init__(message)
        self.ranking = ranking if ranking is not None else []


class NotApplicable(JetGeoError):
    """The operation's structural precondition does not hold."""


class NotOdd(JetGeoError):
    """The counterexample family requires an odd monomial exponent."""
