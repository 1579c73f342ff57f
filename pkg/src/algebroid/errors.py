"""Exception hierarchy shared by every module."""

from __future__ import annotations


class AlgebroidError(Exception):
    """Base class for all errors raised by the package."""


class SolverDiverged(AlgebroidError):
    """Simultaneous root iteration or a Newton corrector failed to converge."""


class PoleAtPoint(AlgebroidError):
    """The leading coefficient vanishes at the requested point."""


class InexactDivision(AlgebroidError):
    """Polynomial division left a remainder above tolerance."""


class RootOnBoundary(AlgebroidError):
    """A divisor point sits on the boundary of the counting region."""


class IdenticallyZero(AlgebroidError):
    """The shifted constant term vanishes identically."""


class PathTooClose(AlgebroidError):
    """A continuation path comes too close to a critical point."""


class TrackingAmbiguous(AlgebroidError):
    """Root matching between consecutive continuation steps is ambiguous."""


class CriticalPointsTooClose(AlgebroidError):
    """Two critical points cannot be separated by disjoint loops."""


class FitIllConditioned(AlgebroidError):
    """Least-squares Puiseux fit is ill conditioned."""


class NotABranchPoint(AlgebroidError):
    """No branch locus passes through the queried point."""


class BoundaryHitsCritical(AlgebroidError):
    """A quadrature node lands on a critical point, even after jittering."""


class ValueAtReference(AlgebroidError):
    """A divisor point coincides with the reference point o."""


class ParabolicProfile(AlgebroidError):
    """The tail integral of a volume-growth profile diverges."""


class ConfigInvalid(AlgebroidError):
    """A run specification failed validation.

    ``field`` names the offending key path (for example ``"r-grid.count"``).
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
