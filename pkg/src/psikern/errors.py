"""Exception types shared across the package."""

from __future__ import annotations


class PsikernError(Exception):
    """Base class for package-specific failures."""


class NonMonotone(PsikernError):
    """A coefficient function is not strictly decreasing where an inverse
    or a monotone majorant is required."""


class SlowConvergence(PsikernError):
    """A certified series sum could not reach the requested relative
    tolerance within the term budget.  Callers may relax rel_tol."""

    def __init__(self, message: str, terms_used: int = 0):
        super().__init__(message)
        self.terms_used = terms_used


class DivisionDomain(PsikernError):
    """A ratio of sums was requested with a zero denominator."""


class UnknownRatioMonotonicity(PsikernError):
    """Class membership needs a ratio-monotonicity guarantee the family
    does not declare."""


class ZeroMultiplier(PsikernError):
    """Inverting the multiplier action hit a zero coefficient under a
    nonzero harmonic."""


class SolverStall(PsikernError):
    """The LP solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, iterations: int = 0):
        super().__init__(message)
        self.iterations = iterations


class HypothesisUnmet(PsikernError):
    """An evaluator's admissibility condition fails at the requested n."""


class TrendViolation(PsikernError):
    """A measured ratio left its certified envelope."""
