"""Exception types raised across the package."""


class PeriodicEigenError(Exception):
    """Base class for all package errors."""


class RankError(PeriodicEigenError, ValueError):
    """An integer basis is rank deficient or has the wrong rank."""


class TorsionError(PeriodicEigenError, ValueError):
    """A sublattice is not saturated, so the quotient group has torsion."""


class GraphValidationError(PeriodicEigenError, ValueError):
    """A graph failed validation; ``report`` holds the violations."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"graph is not admissible: {lines}")


class WindowTooSmall(PeriodicEigenError, ValueError):
    """A neighbour of an evaluation point lies outside the window."""


class DegenerateDegree(PeriodicEigenError, ValueError):
    """``deg(v) - lambda`` is not positive at some vertex."""


class NoPathInWindow(PeriodicEigenError, ValueError):
    """No directed path between two cells stays inside the search box."""


class ConvergenceError(PeriodicEigenError, RuntimeError):
    """An iterative solver hit its iteration cap.

    ``best`` carries the best available iterate (solver specific).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class IrreducibilityError(PeriodicEigenError, ValueError):
    """A matrix handed to the Perron solver is not irreducible."""


class NoSolution(PeriodicEigenError, ValueError):
    """The requested level lies at or above the spectral bottom."""


class EmptySet(PeriodicEigenError, ValueError):
    """The level set is empty (graphs with trivial translation group)."""
