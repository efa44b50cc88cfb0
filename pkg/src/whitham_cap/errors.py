"""Exception classes, grouped by the stage that raises them.

The CLI maps each group onto its own exit code, see ``cli.EXIT_CODES``.
"""


class WhithamCapError(Exception):
    """Base class for every error raised by this package."""


# interval layer
class DomainError(WhithamCapError, ValueError):
    """An argument left the domain of an elementary function."""


class BranchCutError(DomainError):
    """A complex box touches the cut (-inf, 0] of the principal square root."""


class SubdivideRequest(WhithamCapError):
    """A box is too wide for a sharp enclosure; the caller should split it."""


class SingularSystem(WhithamCapError, ArithmeticError):
    """A small interval linear system could not be certified as regular."""


# floating point construction
class NoConvergence(WhithamCapError):
    pass


class SingularJacobian(WhithamCapError):
    pass


class AssumptionViolated(WhithamCapError):
    pass


class SingularTraceGram(WhithamCapError):
    pass


# certified constants and bounds
class VerificationFailed(WhithamCapError):
    def __init__(self, message, box=None):
        super().__init__(message)
        self.box = box


class ThresholdUnsatisfied(WhithamCapError):
    pass


class TailMinimumUnverified(WhithamCapError):
    pass


class MissingStripCertificate(WhithamCapError):
    pass


# radii polynomial and regularity
class NoAdmissibleRadius(WhithamCapError):
    pass


class RegularityUnverified(WhithamCapError):
    pass


# spectral stage
class EnclosureFailed(WhithamCapError):
    pass


class FloorNonpositive(WhithamCapError):
    pass


class CoverageStalled(WhithamCapError):
    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap
