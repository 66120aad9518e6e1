"""Exception types shared across the package.

Validation failures raise a specific subclass of :class:`PollingModelError`
so that callers (and the command line front end) can map them to exit codes
without string matching.
"""


class PollingModelError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMoment(PollingModelError):
    """A mean or squared coefficient of variation is out of range."""


class LoadOutOfRange(PollingModelError):
    """Total offered load must satisfy 0 <= rho < 1."""


class UnnormalizedLoads(PollingModelError):
    """Per-queue load fractions must sum to one at saturation."""


class ZeroTotalSwitchover(PollingModelError):
    """At least one switch-over time must have a positive mean."""


class ZeroLoad(PollingModelError):
    """Operation requires a strictly positive load."""


class DegenerateLoad(PollingModelError):
    """A load-weighted denominator vanished where it must not."""


class NumericalBudget(PollingModelError):
    """The simulation exceeded its configured event budget."""


class SpecFileError(PollingModelError):
    """A system description file failed schema validation."""
