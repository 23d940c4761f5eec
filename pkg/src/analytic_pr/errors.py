"""Exception types shared across the recovery pipeline.

Every failure mode that a caller might want to catch by name gets its own
class; all of them derive from :class:`PhaseRetrievalError` so ``except
PhaseRetrievalError`` catches any library-specific failure without also
swallowing programming errors.
"""


class PhaseRetrievalError(Exception):
    """Base class for all library-specific failures."""


class ZeroSample(PhaseRetrievalError):
    """A time sample is too close to zero for its phase to be meaningful."""


class AllZero(PhaseRetrievalError):
    """Every spectral entry lies below the zero-detection tolerance."""


class CoincidentCenters(PhaseRetrievalError):
    """Two circle centers coincide within tolerance; the ratio test is undefined."""


class DegenerateGeometry(PhaseRetrievalError):
    """Circle centers are (near-)collinear, so the intersection is not unique."""


class NoCommonPoint(PhaseRetrievalError):
    """The three circles share no common point within the residual tolerance."""


class DegenerateSignal(PhaseRetrievalError):
    """The input signal hits a measure-zero degeneracy of the recursion."""


class SingularA0(PhaseRetrievalError):
    """The 4x4 anchor system is numerically singular (condition number too large)."""


class ConsistencyFailure(PhaseRetrievalError):
    """Solved anchor monomials violate their internal consistency relations."""


class AmbiguousBranch(PhaseRetrievalError):
    """Both sign branches of the two-window anchor pass the residual test."""


class NoBranch(PhaseRetrievalError):
    """Neither sign branch of the two-window anchor passes the residual test."""


class InvalidWindow(PhaseRetrievalError):
    """A window (set) fails the validity checks for the requested recovery case.

    Carries the offending :class:`~analytic_pr.windows.ValidationReport` in
    ``report`` when one is available.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
