"""Exception types raised across the package."""


class MuArrangementError(Exception):
    """Base class for all package errors."""


class EmptyFamilyError(MuArrangementError, ValueError):
    """An operation that needs at least one disk received none."""


class DomainError(MuArrangementError, ValueError):
    """A numeric parameter lies outside the domain of the operation."""


class NonOverlappingError(MuArrangementError, ValueError):
    """A pair of disks was expected to form a digon but does not."""


class HypothesisError(MuArrangementError, ValueError):
    """The input does not satisfy the hypotheses of a local inequality check.

    ``hypothesis`` names the failed condition and ``witness`` carries a
    point or index tuple demonstrating the failure.
    """

    def __init__(self, hypothesis, witness=None, message=None):
        self.hypothesis = hypothesis
        self.witness = witness
        super().__init__(message or f"hypothesis failed: {hypothesis} (witness={witness!r})")


class ShortfallError(MuArrangementError):
    """Random generation stopped before reaching the requested disk count.

    The partial arrangement is kept on ``arrangement``.
    """

    def __init__(self, arrangement, target):
        self.arrangement = arrangement
        self.target = target
        super().__init__(f"generated {len(arrangement.disks)} of {target} requested disks")
