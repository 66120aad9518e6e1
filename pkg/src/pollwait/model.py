"""System description for cyclic polling models.

A system is a ring of queues attended by a single server in fixed cyclic
order.  Each queue has renewal arrivals, i.i.d. service times and an
i.i.d. switch-over time that the server incurs when leaving the queue,
whether or not the next queue holds work.

Input laws are given by two moments.  Interarrival times are specified at
saturation: queue loads ``mean_service / mean_interarrival_at_saturation``
must sum to one, and the system is operated at a total load ``rho`` by
stretching every interarrival time by ``1 / rho``.  Service and switch-over
laws do not change with the load.  This makes a single description sweepable
across the whole load range.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import (
    InvalidMoment,
    LoadOutOfRange,
    UnnormalizedLoads,
    ZeroTotalSwitchover,
)
from .fitting import (
    density_at_zero,
    density_at_zero_two_moment_approx,
    fit_two_moments,
)

__all__ = [
    "Discipline",
    "DensityMode",
    "QueueSpec",
    "SystemSpec",
    "DerivedMoments",
    "derive_moments",
    "scale_to_load",
    "exact_density_mode",
]

# Tolerance on |sum of load fractions - 1| before a description is rejected.
LOAD_FRACTION_TOL = 1e-9


class Discipline(Enum):
    """Service discipline applied at every queue of the cycle."""

    EXHAUSTIVE = "exhaustive"  # serve until the queue is empty
    GATED = "gated"  # serve only customers present when the visit begins


class DensityMode(Enum):
    """How the normalized interarrival density at zero is obtained.

    The waiting-time constants need the value ``mean * g(0)`` of each
    interarrival law.  It can be taken from the two-moment approximation
    rule, computed exactly for the fitted law, or supplied by the caller
    when the true law is known.
    """

    TWO_MOMENT_APPROX = "two-moment-approx"
    EXACT_H2 = "exact-h2"
    EXACT_MIXED_ERLANG = "exact-mixed-erlang"
    EXACT_EXPONENTIAL = "exact-exponential"
    USER_VALUE = "user-value"


def _require(cond: bool, exc: type, msg: str) -> None:
    if not cond:
        raise exc(msg)


def _finite(x: float) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


@dataclass(frozen=True)
class QueueSpec:
    """Two-moment description of one queue of the cycle.

    Parameters
    ----------
    mean_service, scv_service : float
        Mean (> 0) and squared coefficient of variation (>= 0) of the
        service time.
    mean_interarrival_at_saturation, scv_interarrival : float
        Interarrival mean (> 0) when the system is fully loaded, and its
        scv.  The scv is load independent.
    mean_switchover, scv_switchover : float
        Switch-over time incurred when the server leaves this queue.  A
        zero mean denotes no switch-over at this position.
    density_mode : DensityMode
        Source of the normalized interarrival density at zero.
    density_value : float, optional
        The value itself; required (and only allowed) with
        ``DensityMode.USER_VALUE``.
    """

    mean_service: float
    scv_service: float
    mean_interarrival_at_saturation: float
    scv_interarrival: float
    mean_switchover: float
    scv_switchover: float
    density_mode: DensityMode = DensityMode.TWO_MOMENT_APPROX
    density_value: Optional[float] = None

    def __post_init__(self) -> None:
        _require(
            _finite(self.mean_service) and self.mean_service > 0.0,
            InvalidMoment,
            f"mean_service must be positive, got {self.mean_service!r}",
        )
        _require(
            _finite(self.mean_interarrival_at_saturation)
            and self.mean_interarrival_at_saturation > 0.0,
            InvalidMoment,
            "mean_interarrival_at_saturation must be positive, got "
            f"{self.mean_interarrival_at_saturation!r}",
        )
        _require(
            _finite(self.mean_switchover) and self.mean_switchover >= 0.0,
            InvalidMoment,
            f"mean_switchover must be >= 0, got {self.mean_switchover!r}",
        )
        for label in ("scv_service", "scv_interarrival", "scv_switchover"):
            value = getattr(self, label)
            _require(
                _finite(value) and value >= 0.0,
                InvalidMoment,
                f"{label} must be >= 0 and finite, got {value!r}",
            )

        scv_a = self.scv_interarrival
        mode = self.density_mode
        if mode is DensityMode.USER_VALUE:
            _require(
                self.density_value is not None
                and _finite(self.density_value)
                and self.density_value >= 0.0,
                InvalidMoment,
                "density_value must be a finite value >= 0 with "
                f"USER_VALUE, got {self.density_value!r}",
            )
        else:
            _require(
                self.density_value is None,
                InvalidMoment,
                "density_value is only allowed with DensityMode.USER_VALUE",
            )
        if mode is DensityMode.EXACT_H2:
            _require(
                scv_a > 1.0,
                InvalidMoment,
                f"EXACT_H2 requires scv_interarrival > 1, got {scv_a!r}",
            )
        elif mode is DensityMode.EXACT_EXPONENTIAL:
            _require(
                scv_a == 1.0,
                InvalidMoment,
                f"EXACT_EXPONENTIAL requires scv_interarrival == 1, got {scv_a!r}",
            )
        elif mode is DensityMode.EXACT_MIXED_ERLANG:
            _require(
                0.0 < scv_a <= 1.0,
                InvalidMoment,
                "EXACT_MIXED_ERLANG requires 0 < scv_interarrival <= 1, "
                f"got {scv_a!r}",
            )

    @property
    def load_fraction(self) -> float:
        """Share of the total load carried by this queue."""
        return self.mean_service / self.mean_interarrival_at_saturation


def exact_density_mode(scv_interarrival: float) -> DensityMode:
    """Density mode that evaluates the fitted law for this scv exactly.

    For scv == 0 the two-moment rule already gives the exact value (0 for a
    deterministic law), so no dedicated mode is needed.
    """
    if scv_interarrival == 0.0:
        return DensityMode.TWO_MOMENT_APPROX
    if scv_interarrival == 1.0:
        return DensityMode.EXACT_EXPONENTIAL
    if scv_interarrival > 1.0:
        return DensityMode.EXACT_H2
    return DensityMode.EXACT_MIXED_ERLANG


@dataclass(frozen=True)
class SystemSpec:
    """A cyclic polling system at a given total load.

    ``queues`` are listed in server visit order; indices elsewhere in the
    package are 0-based positions in this tuple.  ``rho`` is the total
    offered load, 0 <= rho < 1.
    """

    queues: tuple[QueueSpec, ...]
    discipline: Discipline
    rho: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "queues", tuple(self.queues))
        _require(
            len(self.queues) >= 1,
            InvalidMoment,
            "a system needs at least one queue",
        )
        _require(
            _finite(self.rho) and 0.0 <= self.rho < 1.0,
            LoadOutOfRange,
            f"rho must satisfy 0 <= rho < 1, got {self.rho!r}",
        )
        total = sum(q.load_fraction for q in self.queues)
        _require(
            abs(total - 1.0) <= LOAD_FRACTION_TOL,
            UnnormalizedLoads,
            f"load fractions must sum to 1, got {total!r}",
        )
        _require(
            any(q.mean_switchover > 0.0 for q in self.queues),
            ZeroTotalSwitchover,
            "at least one switch-over time must have a positive mean",
        )

    @property
    def n(self) -> int:
        return len(self.queues)


def scale_to_load(spec: SystemSpec, rho: float) -> SystemSpec:
    """Same system operated at a different total load."""
    return dataclasses.replace(spec, rho=rho)


@dataclass(frozen=True)
class DerivedMoments:
    """Load-free moment aggregates of a system description.

    Everything here depends only on the saturation description, not on the
    operating load, so one instance serves a whole load sweep.

    Attributes
    ----------
    load_fractions : tuple of float
        Per-queue share of the total load; sums to one.
    arrival_rates_at_saturation : tuple of float
        Reciprocal interarrival means at saturation.
    switchover_mean_total, switchover_var_total : float
        Mean and variance of the total switch-over time per cycle.
    switchover_vars : tuple of float
        Per-queue switch-over variances.
    switchover_residual : float
        Mean residual of the total switch-over time.
    service_residuals : tuple of float
        Per-queue mean residual service times.
    service_residual_global : float
        Mean residual service time of an arbitrary customer.
    heavy_traffic_variance : float
        Rate-weighted sum of service variances and squared-load-weighted
        interarrival variances; drives the heavy-traffic delay.
    density_at_zero : tuple of float
        Normalized interarrival density values at zero.
    """

    load_fractions: tuple[float, ...]
    arrival_rates_at_saturation: tuple[float, ...]
    switchover_mean_total: float
    switchover_var_total: float
    switchover_vars: tuple[float, ...]
    switchover_residual: float
    service_residuals: tuple[float, ...]
    service_residual_global: float
    heavy_traffic_variance: float
    density_at_zero: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.load_fractions)


def _density_value(queue: QueueSpec) -> float:
    mode = queue.density_mode
    if mode is DensityMode.TWO_MOMENT_APPROX:
        return density_at_zero_two_moment_approx(queue.scv_interarrival)
    if mode is DensityMode.USER_VALUE:
        return queue.density_value
    fitted = fit_two_moments(
        queue.mean_interarrival_at_saturation, queue.scv_interarrival
    )
    return density_at_zero(fitted)


def derive_moments(spec: SystemSpec) -> DerivedMoments:
    """Compute the moment aggregates the approximations are built from.

    Parameters
    ----------
    spec : SystemSpec
        A validated system description.

    Returns
    -------
    DerivedMoments
    """
    queues = spec.queues
    load_fractions = tuple(q.load_fraction for q in queues)
    rates = tuple(1.0 / q.mean_interarrival_at_saturation for q in queues)

    sw_means = tuple(q.mean_switchover for q in queues)
    sw_vars = tuple(
        q.scv_switchover * q.mean_switchover**2 for q in queues
    )
    sw_total = sum(sw_means)
    sw_var_total = sum(sw_vars)
    # E[S_res] = E[S^2] / (2 E[S]) for the total switch-over time per cycle.
    sw_residual = (sw_var_total + sw_total**2) / (2.0 * sw_total)

    service_residuals = tuple(
        (1.0 + q.scv_service) * q.mean_service / 2.0 for q in queues
    )
    second_moment_rate = sum(
        r * (1.0 + q.scv_service) * q.mean_service**2
        for r, q in zip(rates, queues)
    )
    first_moment_rate = sum(
        r * q.mean_service for r, q in zip(rates, queues)
    )
    service_residual_global = second_moment_rate / (2.0 * first_moment_rate)

    ht_variance = sum(
        r
        * (
            q.scv_service * q.mean_service**2
            + f * f * q.scv_interarrival * q.mean_interarrival_at_saturation**2
        )
        for r, f, q in zip(rates, load_fractions, queues)
    )

    density = tuple(_density_value(q) for q in queues)

    return DerivedMoments(
        load_fractions=load_fractions,
        arrival_rates_at_saturation=rates,
        switchover_mean_total=sw_total,
        switchover_var_total=sw_var_total,
        switchover_vars=sw_vars,
        switchover_residual=sw_residual,
        service_residuals=service_residuals,
        service_residual_global=service_residual_global,
        heavy_traffic_variance=ht_variance,
        density_at_zero=density,
    )
