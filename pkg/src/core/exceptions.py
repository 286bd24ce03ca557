"""
Exception hierarchy for the toolkit.

Every documented failure mode has a named subclass so callers (and the CLI)
can map it to a precise message and exit code.
"""


class LipminError(Exception):
    """Base class for all toolkit errors."""

    pass


class PathError(LipminError):
    """Raised for invalid grids, windows, or out-of-window evaluation times."""

    pass


class WindowError(LipminError):
    """Raised when a window does not contain 0 or G/D cannot be located in it."""

    pass


class WindowTooSmallError(WindowError):
    """Raised when no contact point is found inside the window."""

    pass


class TruncationError(WindowError):
    """Raised when an infimum over a half-line is attained too close to the window edge."""

    pass


class ExistenceUndecidableError(LipminError):
    """Raised when the jump law has no finite mean."""

    pass


class InvalidContactPairError(LipminError):
    """Raised when two contact points are further apart in value than alpha allows."""

    pass


class CorruptExcursionError(LipminError):
    """Raised when an excursion's final value violates |w| <= alpha * zeta."""

    pass


class LawDomainError(LipminError):
    """Raised when a closed-form law is evaluated outside its domain."""

    pass


class UnsupportedLawError(LipminError):
    """Raised for law variants that have no closed form implemented."""

    pass


class StepCapExceededError(LipminError):
    """Raised when a simulated path segment would exceed the step cap."""

    pass


class HorizonCapError(LipminError):
    """Raised when an auto-extended simulation horizon exceeds its cap."""

    pass


class PoolTooSmallError(LipminError):
    """Raised when a size-biased resampling pool is too small."""

    pass


class NonMonotoneCdfError(LipminError):
    """Raised when a reference CDF is not monotone on the sample range."""

    pass


class InsufficientSamplesError(LipminError):
    """Raised when a statistical check receives too few samples."""

    pass


class UnknownSuiteError(LipminError):
    """Raised when a verification suite name is not registered."""

    pass
